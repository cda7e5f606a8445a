#pragma once

#include <string>

#include "dyck/libclient.hpp"

namespace dyck {

/// `dycksum 1` text format:
///
///   dycksum 1
///   digest <algo:hex>
///   methods <id...>
///   method <id>
///   bag <id> parent=<id|-> : <node names...>
///   rf <node> : <node names...>
///   rb <node> : <node names...>
///   summary-edge <x> <y>
///   end
///
/// Node references are names, resolved against the client-phase graph.
std::string write_summary(const SummaryArtifact& artifact,
                          const LabeledGraph& library_graph);

/// Reconstructs the artifact against `resolve`, which must contain every
/// node named in the file (the full graph of the client phase qualifies).
SummaryArtifact read_summary(const std::string& text,
                             const LabeledGraph& resolve);

void write_summary_file(const SummaryArtifact& artifact,
                        const LabeledGraph& library_graph,
                        const std::string& path);
SummaryArtifact read_summary_file(const std::string& path,
                                  const LabeledGraph& resolve);

} // namespace dyck
