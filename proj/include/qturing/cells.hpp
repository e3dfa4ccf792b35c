#pragma once

// Turing-cell builders, tape-segment chaining and control-particle simulation.
//
// A cell with S machine states and 2^bits tape symbols is a unitary automaton
// over H = C^(2^bits) with interfaces [(R,1..S), (L,1..S)] on both sides. An
// input (R,i) means the control arrives moving right (from the left
// neighbour) in state i; an output (R,i) means it leaves moving right.
// Basis of H (x) K: symbol * 2S + interface.
//
// Chain wiring: output (R,.) of cell c feeds input (R,.) of cell c+1, and
// output (L,.) of cell c+1 feeds input (L,.) of cell c. The open segment keeps
// the interfaces [(R,.) into cell 1, (L,.) into cell n] and
// [(R,.) out of cell n, (L,.) out of cell 1]. With `mirror` the roles of the
// two output groups are exchanged before wiring, so an (L,.) output travels
// to the right neighbour.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qturing/dqta.hpp"
#include "qturing/errors.hpp"
#include "qturing/intcat.hpp"
#include "qturing/labels.hpp"
#include "qturing/linalg.hpp"

namespace qturing {

enum class Direction { right, left };

struct CellConfig {
  std::size_t symbol = 0;
  Direction dir = Direction::right;
  std::size_t state = 0;  // 0-based

  bool operator==(const CellConfig&) const = default;
};

struct RuleEntry {
  CellConfig from;
  CellConfig to;
  Complex phase{1.0, 0.0};
};

/// Reversible rule: configurations not listed map to themselves.
struct RuleTable {
  std::vector<RuleEntry> entries;
};

struct Cell {
  UnitaryDqta automaton;
  std::size_t states;
  Labels inputs;
  Labels outputs;
};

inline std::size_t cell_index(const CellConfig& c, std::size_t states) {
  return c.symbol * 2 * states + (c.dir == Direction::left ? states : 0) + c.state;
}

/// Flip bit 0 of the symbol; bounce when it was set.
inline RuleTable toggle_bounce_rule(std::size_t states, std::size_t bits) {
  RuleTable rule;
  const std::size_t symbols = std::size_t{1} << bits;
  for (std::size_t s = 0; s < symbols; ++s)
    for (std::size_t i = 0; i < states; ++i)
      for (const Direction d : {Direction::right, Direction::left}) {
        const bool bounce = (s & 1U) != 0;
        const Direction out = bounce ? (d == Direction::right ? Direction::left : Direction::right) : d;
        rule.entries.push_back({{s, d, i}, {s ^ 1U, out, i}, {1.0, 0.0}});
      }
  return rule;
}

namespace detail {

inline void check_cell_dims(std::size_t states, std::size_t bits) {
  if (states == 0) throw ShapeError("cell: need at least one state");
  if (bits > 12) throw ShapeError("cell: alphabet_bits too large");
}

inline Cell finish_cell(std::size_t states, std::size_t bits, Operator tau) {
  const std::size_t h = std::size_t{1} << bits;
  auto t = UnitaryDqta::make(Dqta::make(h, 2 * states, 2 * states, std::move(tau)));
  return {std::move(t), states, cell_labels(states), cell_labels(states)};
}

}  // namespace detail

/// One-cell automaton from a reversible rule table (default: every
/// configuration passes through unchanged).
inline Cell build_cell(std::size_t states, std::size_t bits, const RuleTable& rule = {}) {
  detail::check_cell_dims(states, bits);
  const std::size_t h = std::size_t{1} << bits;
  const std::size_t n = h * 2 * states;
  std::vector<std::optional<std::pair<std::size_t, Complex>>> image(n);
  for (const auto& e : rule.entries) {
    for (const auto* c : {&e.from, &e.to})
      if (c->symbol >= h || c->state >= states)
        throw ShapeError("cell rule: configuration out of range (symbol " +
                         std::to_string(c->symbol) + ", state " + std::to_string(c->state + 1) +
                         ")");
    if (std::abs(std::abs(e.phase) - 1.0) > 1e-12)
      throw ShapeError("cell rule: phases must have unit modulus");
    const std::size_t from = cell_index(e.from, states);
    if (image[from]) throw ShapeError("cell rule: configuration listed twice; rule is not a function");
    image[from] = std::pair{cell_index(e.to, states), e.phase};
  }
  Operator tau = zeros(n, n);
  std::vector<bool> hit(n, false);
  for (std::size_t c = 0; c < n; ++c) {
    const auto [target, phase] = image[c].value_or(std::pair{c, Complex(1.0)});
    if (hit[target]) throw ShapeError("cell rule: not a bijection on configurations");
    hit[target] = true;
    tau(static_cast<Index>(target), static_cast<Index>(c)) = phase;
  }
  return detail::finish_cell(states, bits, std::move(tau));
}

/// One-cell automaton from an explicit unitary on H (x) K.
inline Cell build_cell(std::size_t states, std::size_t bits, Operator tau) {
  detail::check_cell_dims(states, bits);
  return detail::finish_cell(states, bits, std::move(tau));
}

/// The cell as a morphism (S, S) -> (S, S): left boundary to right boundary.
inline Int0Morphism cell_morphism(const Cell& cell) {
  return Int0Morphism::make(cell.states, cell.states, cell.automaton);
}

struct ChainOptions {
  bool mirror = false;
  bool ring = false;
};

namespace detail {

/// Reorders a labelled cell to the canonical [(R,.), (L,.)] layout.
inline UnitaryDqta canonical_cell(const Cell& cell) {
  const std::size_t s = cell.states;
  const auto positions = [&](const Labels& labels, const char* side) {
    const Labels want = cell_labels(s);
    if (labels.empty() || labels_total(labels) != 2 * s)
      throw ShapeError(std::string("chain: cell ") + side + " interfaces are not labelled (R,i)/(L,i)");
    std::vector<std::size_t> order;
    for (const auto& w : want) {
      std::size_t idx = 0;
      bool found = false;
      for (; idx < labels.size(); ++idx)
        if (labels[idx].name == w.name && labels[idx].dim == 1) {
          found = true;
          break;
        }
      if (!found)
        throw ShapeError(std::string("chain: cell ") + side + " interface " + w.name + " missing");
      order.push_back(idx);
    }
    return order;
  };
  const auto in_order = positions(cell.inputs, "input");
  const auto out_order = positions(cell.outputs, "output");
  const SpaceDims ones(std::vector<std::size_t>(2 * s, 1));
  // pre: canonical -> file layout; post: file layout -> canonical.
  std::vector<std::size_t> pre_order(2 * s);
  for (std::size_t p = 0; p < 2 * s; ++p) pre_order[in_order[p]] = p;
  const Dqta pre = permutation_automaton(ones, pre_order);
  const Dqta post = permutation_automaton(ones, out_order);
  return UnitaryDqta::make(cascade(cascade(pre, cell.automaton.dqta()), post), kCompositeTol);
}

/// Transition is a permutation with unit-modulus phases.
inline bool is_monomial_unitary(const Operator& tau) {
  if (tau.rows() != tau.cols()) return false;
  const auto rows = monomial_rows(tau);
  if (rows.empty() && tau.cols() > 0) return false;
  std::vector<bool> seen(static_cast<std::size_t>(tau.rows()), false);
  for (Index j = 0; j < tau.cols(); ++j) {
    const Index r = rows[static_cast<std::size_t>(j)];
    if (r < 0 || seen[static_cast<std::size_t>(r)]) return false;
    if (std::abs(std::abs(tau(r, j)) - 1.0) > 1e-12) return false;
    seen[static_cast<std::size_t>(r)] = true;
  }
  return true;
}

/// Chain by turing tensor, symmetry routing and feedback.
inline Dqta chain_by_feedback(const Dqta& cell, std::size_t s, std::size_t n) {
  Dqta all = cell;
  for (std::size_t c = 1; c < n; ++c) all = turing_tensor(all, cell);
  if (n == 1) return all;
  // Inputs of `all`: [R_1, L_1, ..., R_n, L_n]; outputs likewise.
  const std::size_t blocks = 2 * n;
  const SpaceDims dims(std::vector<std::size_t>(blocks, s));
  const auto r_block = [](std::size_t c) { return 2 * c; };      // c is 0-based
  const auto l_block = [](std::size_t c) { return 2 * c + 1; };
  // Internal wires, in feedback order: (out R_c -> in R_{c+1}), (out L_{c+1} -> in L_c).
  std::vector<std::size_t> in_lead, out_lead;
  for (std::size_t c = 0; c + 1 < n; ++c) {
    out_lead.push_back(r_block(c));
    in_lead.push_back(r_block(c + 1));
    out_lead.push_back(l_block(c + 1));
    in_lead.push_back(l_block(c));
  }
  std::vector<std::size_t> in_layout = in_lead, out_layout = out_lead;
  in_layout.push_back(r_block(0));
  in_layout.push_back(l_block(n - 1));
  out_layout.push_back(r_block(n - 1));
  out_layout.push_back(l_block(0));
  // pre maps the routed layout to the tensor's native layout.
  std::vector<std::size_t> pre_order(blocks);
  for (std::size_t p = 0; p < blocks; ++p) pre_order[in_layout[p]] = p;
  const Dqta pre = permutation_automaton(dims, pre_order);
  const Dqta post = permutation_automaton(dims, out_layout);
  return feedback_dqta(cascade(cascade(pre, all), post), 2 * s * (n - 1));
}

/// Chain of a monomial cell by following the control particle.
inline Dqta chain_by_paths(const Operator& cell_tau, std::size_t h, std::size_t s, std::size_t n) {
  std::size_t hn = 1;
  for (std::size_t c = 0; c < n; ++c) hn *= h;
  const std::size_t k = 2 * s;
  const auto rows = monomial_rows(cell_tau);
  Operator tau = zeros(hn * k, hn * k);
  std::vector<std::size_t> sym(n);
  const std::size_t max_moves = n * hn * k + 1;
  for (std::size_t state = 0; state < hn; ++state)
    for (std::size_t ext = 0; ext < k; ++ext) {
      std::size_t rem = state;
      for (std::size_t c = n; c-- > 0;) {
        sym[c] = rem % h;
        rem /= h;
      }
      // Entry: (R, j) into cell 0, or (L, j) into cell n-1.
      std::size_t cell = ext < s ? 0 : n - 1;
      std::size_t iface = ext;
      Complex amp(1.0);
      std::optional<std::size_t> exit;
      for (std::size_t move = 0; move < max_moves && !exit; ++move) {
        const std::size_t col = sym[cell] * k + iface;
        const auto row = static_cast<std::size_t>(rows[col]);
        amp *= cell_tau(static_cast<Index>(row), static_cast<Index>(col));
        sym[cell] = row / k;
        const std::size_t out = row % k;
        const bool goes_right = out < s;
        const std::size_t j = out % s;
        if (goes_right) {
          if (cell + 1 < n) {
            ++cell;
            iface = j;
          } else {
            exit = j;
          }
        } else {
          if (cell > 0) {
            --cell;
            iface = s + j;
          } else {
            exit = s + j;
          }
        }
      }
      if (!exit) throw ShapeError("chain: control particle did not leave the segment");
      std::size_t target = 0;
      for (std::size_t c = 0; c < n; ++c) target = target * h + sym[c];
      tau(static_cast<Index>(target * k + *exit), static_cast<Index>(state * k + ext)) = amp;
    }
  return Dqta::make(hn, k, k, std::move(tau), kCompositeTol);
}

}  // namespace detail

/// n-cell tape segment (or ring) from one labelled cell.
inline Cell chain_cells(const Cell& cell, std::size_t n, ChainOptions opts = {}) {
  if (n == 0) throw ShapeError("chain: need at least one cell");
  const std::size_t s = cell.states;
  UnitaryDqta canon = detail::canonical_cell(cell);
  if (opts.mirror)
    canon = UnitaryDqta::make(cascade(canon.dqta(), symmetry_automaton(s, s)), kCompositeTol);

  Dqta open = detail::is_monomial_unitary(canon.transition())
                  ? detail::chain_by_paths(canon.transition(), canon.h(), s, n)
                  : detail::chain_by_feedback(canon.dqta(), s, n);
  Labels outputs = cell_labels(s);
  if (opts.mirror) {
    // Right end emits the cell's (L,.) outputs, left end its (R,.) outputs.
    const Labels base = cell_labels(s);
    outputs = concat(Labels(base.begin() + static_cast<std::ptrdiff_t>(s), base.end()),
                     Labels(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(s)));
  }
  if (opts.ring) return {UnitaryDqta::make(feedback_dqta(open, 2 * s), kCompositeTol), s, {}, {}};
  return {UnitaryDqta::make(std::move(open), kCompositeTol), s, cell_labels(s), outputs};
}

struct SimulationTrace {
  std::size_t steps = 0;
  std::vector<std::string> summands;
  std::vector<std::vector<double>> masses;  ///< one row per step, including step 0
  std::vector<double> total_norm;           ///< squared norm per step
};

/// Basis vector e_state (x) e_interface of H (x) N.
inline Eigen::VectorXcd basis_state(const Qta& q, std::size_t interface_index,
                                    std::size_t state_index = 0) {
  if (interface_index >= q.rank() || state_index >= q.h())
    throw ShapeError("simulate: start (" + std::to_string(interface_index) + ", " +
                     std::to_string(state_index) + ") out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Index>(q.h() * q.rank()));
  v(static_cast<Index>(state_index * q.rank() + interface_index)) = 1.0;
  return v;
}

/// Applies tau `steps` times, recording the probability mass on each summand
/// of the rank space. Without labels every basis interface is its own summand.
inline SimulationTrace simulate(const Qta& q, const Eigen::VectorXcd& initial, std::size_t steps,
                                const Labels& summands = {}) {
  if (initial.size() != q.transition().cols())
    throw ShapeError("simulate: initial state has dimension " + std::to_string(initial.size()) +
                     ", expected " + std::to_string(q.transition().cols()));
  const double norm0 = initial.squaredNorm();
  if (std::abs(norm0 - 1.0) > 1e-9)
    throw std::invalid_argument("simulate: initial state is not normalized (norm^2 = " +
                                std::to_string(norm0) + ")");
  Labels parts = summands;
  if (parts.empty())
    for (std::size_t i = 0; i < q.rank(); ++i) parts.push_back({std::to_string(i), 1});
  if (labels_total(parts) != q.rank())
    throw ShapeError("simulate: labels do not partition the rank space");

  SimulationTrace trace;
  trace.steps = steps;
  for (const auto& p : parts) trace.summands.push_back(p.name);
  const std::size_t n = q.rank();
  const auto record = [&](const Eigen::VectorXcd& v) {
    std::vector<double> mass(parts.size(), 0.0);
    for (std::size_t st = 0; st < q.h(); ++st) {
      std::size_t off = 0;
      for (std::size_t p = 0; p < parts.size(); ++p) {
        for (std::size_t x = 0; x < parts[p].dim; ++x)
          mass[p] += std::norm(v(static_cast<Index>(st * n + off + x)));
        off += parts[p].dim;
      }
    }
    trace.masses.push_back(std::move(mass));
    trace.total_norm.push_back(v.squaredNorm());
  };
  Eigen::VectorXcd v = initial;
  record(v);
  for (std::size_t i = 0; i < steps; ++i) {
    v = q.transition() * v;
    record(v);
  }
  return trace;
}

}  // namespace qturing
