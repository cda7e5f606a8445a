#include "dyck/label.hpp"

namespace dyck {

std::string to_string(const Label& l) {
  switch (l.kind) {
  case LabelKind::Epsilon: return "eps";
  case LabelKind::Open: return "o" + std::to_string(l.index);
  case LabelKind::Close: return "c" + std::to_string(l.index);
  }
  return "?";
}

bool is_dyck(std::span<const Label> word) {
  std::vector<int> stack;
  for (const Label& l : word) {
    switch (l.kind) {
    case LabelKind::Epsilon:
      break;
    case LabelKind::Open:
      stack.push_back(l.index);
      break;
    case LabelKind::Close:
      if (stack.empty() || stack.back() != l.index) return false;
      stack.pop_back();
      break;
    }
  }
  return stack.empty();
}

} // namespace dyck
