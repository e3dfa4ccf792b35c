#pragma once

// Human-readable names for direct summands of an interface. Purely
// presentational: every algebraic operation works on positional dims.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace qturing {

struct InterfaceLabel {
  std::string name;
  std::size_t dim = 1;

  bool operator==(const InterfaceLabel&) const = default;
};

using Labels = std::vector<InterfaceLabel>;

inline std::size_t labels_total(const Labels& labels) {
  std::size_t n = 0;
  for (const auto& lab : labels) n += lab.dim;
  return n;
}

/// Offset of the summand with the given name, if present.
inline std::optional<std::size_t> label_offset(const Labels& labels, const std::string& name) {
  std::size_t off = 0;
  for (const auto& lab : labels) {
    if (lab.name == name) return off;
    off += lab.dim;
  }
  return std::nullopt;
}

/// Labels with the leading `u` dims removed; empty if u cuts a summand.
inline Labels drop_leading(const Labels& labels, std::size_t u) {
  std::size_t acc = 0;
  std::size_t i = 0;
  while (i < labels.size() && acc < u) acc += labels[i++].dim;
  if (acc != u) return {};
  return Labels(labels.begin() + static_cast<std::ptrdiff_t>(i), labels.end());
}

inline Labels concat(Labels a, const Labels& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// "(R,1)" ... "(R,S)", "(L,1)" ... "(L,S)".
inline Labels cell_labels(std::size_t states) {
  Labels out;
  for (const char dir : {'R', 'L'})
    for (std::size_t i = 1; i <= states; ++i)
      out.push_back({std::string("(") + dir + "," + std::to_string(i) + ")", 1});
  return out;
}

}  // namespace qturing
