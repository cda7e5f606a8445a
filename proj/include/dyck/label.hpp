#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dyck {

enum class LabelKind : uint8_t { Epsilon, Open, Close };

/// Edge label over the alphabet {eps} u {o1..ok, c1..ck}.
/// `index` is 1-based and meaningful only for Open/Close.
struct Label {
  LabelKind kind = LabelKind::Epsilon;
  int index = 0;

  static Label eps() { return {LabelKind::Epsilon, 0}; }
  static Label open(int i) { return {LabelKind::Open, i}; }
  static Label close(int i) { return {LabelKind::Close, i}; }

  bool is_eps() const { return kind == LabelKind::Epsilon; }
  bool is_open() const { return kind == LabelKind::Open; }
  bool is_close() const { return kind == LabelKind::Close; }

  /// The complementary label of a mirror edge: o_i <-> c_i, eps <-> eps.
  Label mirror() const {
    switch (kind) {
    case LabelKind::Open: return close(index);
    case LabelKind::Close: return open(index);
    default: return eps();
    }
  }

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;
};

std::string to_string(const Label& l);

/// True iff the eps-erased word is balanced, i.e. belongs to the Dyck
/// language over k parenthesis types. Checked with a stack of open indices.
bool is_dyck(std::span<const Label> word);
inline bool is_dyck(const std::vector<Label>& word) {
  return is_dyck(std::span<const Label>(word));
}

} // namespace dyck
