#pragma once

// Command dispatch for the qturing tool. Exit codes: 0 success, 1 validation
// or law failure, 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qturing/axioms.hpp"
#include "qturing/cells.hpp"
#include "qturing/dqta.hpp"
#include "qturing/errors.hpp"
#include "qturing/intcat.hpp"
#include "qturing/io.hpp"
#include "qturing/labels.hpp"

namespace qturing {

namespace detail {

inline void print_summary(std::ostream& out, const AutomatonFile& f) {
  if (f.kind == AutomatonKind::qta) {
    out << "qta h=" << f.h << " rank=" << f.k;
  } else {
    out << "dqta h=" << f.h << " k=" << f.k << " l=" << f.l;
  }
  out << " matrix " << shape_of(f.matrix) << "\n";
}

inline std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(6) << v;
  return ss.str();
}

struct CommandState {
  std::vector<std::string> files;
  std::string output;
  std::size_t u = 0;
  std::size_t src = 0;
  std::size_t states = 0;
  std::size_t bits = 0;
  std::string rule;
  std::string preset;
  std::size_t n = 1;
  bool mirror = false;
  bool ring = false;
  std::size_t steps = 0;
  std::size_t start = 0;
  std::size_t start_state = 0;
  CheckConfig cfg;
  std::vector<std::string> laws;
  std::string report;
  std::string replay_law;
  std::uint64_t replay_seed = 0;
  bool replay_seed_set = false;
};

inline int cmd_validate(const CommandState& st, std::ostream& out) {
  const AutomatonFile f = read_automaton(st.files.at(0));
  print_summary(out, f);
  if (f.kind == AutomatonKind::qta) {
    const Qta q = to_qta(f);
    out << "unitarity defect " << fmt(unitarity_defect(q.transition())) << "\n";
  } else {
    const Dqta t = to_dqta(f);
    out << "isometry defect " << fmt(isometry_defect(t.transition())) << "\n";
    const double u = unitarity_defect(t.transition());
    out << "unitary " << (u <= kIsometryTol ? "yes" : "no") << "\n";
  }
  out << "ok\n";
  return 0;
}

inline void emit(const AutomatonFile& f, const std::string& path, std::ostream& out) {
  write_automaton(f, path);
  print_summary(out, f);
  out << "wrote " << path << "\n";
}

inline int cmd_compose(const CommandState& st, std::ostream& out) {
  const AutomatonFile a = read_automaton(st.files.at(0)), b = read_automaton(st.files.at(1));
  const Dqta t = cascade(to_dqta(a), to_dqta(b));
  emit(to_file(t, a.input_labels, b.output_labels), st.output, out);
  return 0;
}

inline int cmd_tensor(const CommandState& st, std::ostream& out) {
  const AutomatonFile a = read_automaton(st.files.at(0)), b = read_automaton(st.files.at(1));
  const Dqta t = turing_tensor(to_dqta(a), to_dqta(b));
  const auto both = [](const Labels& x, const Labels& y) {
    return x.empty() || y.empty() ? Labels{} : concat(x, y);
  };
  emit(to_file(t, both(a.input_labels, b.input_labels), both(a.output_labels, b.output_labels)),
       st.output, out);
  return 0;
}

inline int cmd_feedback(const CommandState& st, std::ostream& out) {
  const AutomatonFile a = read_automaton(st.files.at(0));
  const Dqta t = feedback_dqta(to_dqta(a), st.u);
  emit(to_file(t, drop_leading(a.input_labels, st.u), drop_leading(a.output_labels, st.u)),
       st.output, out);
  return 0;
}

inline int cmd_bidir(const CommandState& st, std::ostream& out) {
  const AutomatonFile a = read_automaton(st.files.at(0));
  const Qta q = bidirectionalize(UnitaryDqta::make(to_dqta(a)));
  Labels rank;
  if (!a.input_labels.empty() && !a.output_labels.empty())
    rank = concat(a.input_labels, a.output_labels);
  emit(to_file(q, rank), st.output, out);
  return 0;
}

inline int cmd_name(const CommandState& st, std::ostream& out) {
  const AutomatonFile a = read_automaton(st.files.at(0));
  const UnitaryDqta t = UnitaryDqta::make(to_dqta(a));
  if (st.src > t.k()) throw ShapeError("name: --src exceeds the input interface");
  const std::size_t dst = t.k() - st.src;
  const Qta q = name_of(Int0Morphism::make(st.src, dst, t));
  emit(to_file(q, a.input_labels), st.output, out);
  return 0;
}

inline int cmd_cell(const CommandState& st, std::ostream& out) {
  Cell cell = [&] {
    if (!st.rule.empty()) {
      const RuleFile rf = parse_rule_text(read_file(st.rule), st.rule);
      if (rf.states != st.states || rf.bits != st.bits)
        throw ShapeError("cell: rule file is for states=" + std::to_string(rf.states) +
                         ", bits=" + std::to_string(rf.bits));
      return build_cell(rf);
    }
    if (st.preset == "toggle-bounce")
      return build_cell(st.states, st.bits, toggle_bounce_rule(st.states, st.bits));
    return build_cell(st.states, st.bits);
  }();
  emit(to_file(cell), st.output, out);
  return 0;
}

inline int cmd_chain(const CommandState& st, std::ostream& out) {
  const Cell cell = to_cell(read_automaton(st.files.at(0)));
  const Cell chained = chain_cells(cell, st.n, {st.mirror, st.ring});
  emit(to_file(chained), st.output, out);
  return 0;
}

inline int cmd_simulate(const CommandState& st, std::ostream& out) {
  const AutomatonFile f = read_automaton(st.files.at(0));
  const Qta q = to_qta(f);
  const SimulationTrace tr =
      simulate(q, basis_state(q, st.start, st.start_state), st.steps, f.input_labels);
  out << "step\ttotal_norm";
  for (const auto& s : tr.summands) out << "\t" << s;
  out << "\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.masses.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12f", tr.total_norm[i]);
    out << i << "\t" << buf;
    for (double m : tr.masses[i]) {
      std::snprintf(buf, sizeof buf, "%.6f", m);
      out << "\t" << buf;
    }
    out << "\n";
    worst = std::max(worst, std::abs(tr.total_norm[i] - 1.0));
  }
  out << "# max |norm - 1| = " << fmt(worst) << "\n";
  return worst <= 1e-9 ? 0 : 1;
}

inline int cmd_axioms(CommandState st, std::ostream& out) {
  if (!st.laws.empty()) st.cfg.law_set = {st.laws.begin(), st.laws.end()};
  st.cfg.validate();
  if (!st.replay_law.empty()) {
    if (!st.replay_seed_set) throw std::invalid_argument("axioms: --replay needs --at");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", replay(st.replay_law, st.cfg, st.replay_seed));
    out << st.replay_law << " seed " << st.replay_seed << " violation " << buf << "\n";
    return 0;
  }
  const std::vector<LawReport> reports = run_all(st.cfg);
  const std::string text = report_text(reports);
  if (st.report.empty()) {
    out << text;
  } else {
    write_file(st.report, text);
  }
  bool ok = true;
  for (const auto& r : reports) {
    ok = ok && r.as_expected();
    if (!st.report.empty() || !r.as_expected())
      out << (r.as_expected() ? "ok   " : "FAIL ") << r.law << " max_violation "
          << fmt(r.max_violation) << (r.expected_failure ? " (expected failure)" : "") << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace detail

/// Runs one command line (without the program name).
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Turing automata: feedback, Int construction, Turing cells", "qturing"};
  app.require_subcommand(1);
  detail::CommandState st;

  const auto existing = [](CLI::Option* o) { return o->check(CLI::ExistingFile); };

  auto* validate = app.add_subcommand("validate", "Check an automaton file");
  existing(validate->add_option("file", st.files, "Automaton file")->required()->expected(1));

  auto* compose = app.add_subcommand("compose", "Cascade product f1 ; f2");
  existing(compose->add_option("files", st.files, "Two dqta files")->required()->expected(2));
  compose->add_option("-o,--output", st.output, "Output file")->required();

  auto* tensor = app.add_subcommand("tensor", "Turing tensor f1 ⊞ f2");
  existing(tensor->add_option("files", st.files, "Two dqta files")->required()->expected(2));
  tensor->add_option("-o,--output", st.output, "Output file")->required();

  auto* feedback = app.add_subcommand("feedback", "Feedback over the leading u interface dims");
  existing(feedback->add_option("file", st.files, "dqta file")->required()->expected(1));
  feedback->add_option("--u", st.u, "Feedback dimension")->required();
  feedback->add_option("-o,--output", st.output, "Output file")->required();

  auto* bidir = app.add_subcommand("bidir", "Name of F(t) = t ⊞ t^dagger as a qta of rank k+l");
  existing(bidir->add_option("file", st.files, "Unitary dqta file")->required()->expected(1));
  bidir->add_option("-o,--output", st.output, "Output file")->required();

  auto* name = app.add_subcommand(
      "name", "Name of a unitary dqta K (+) L -> L (+) K read as an Int0 morphism K -> L");
  existing(name->add_option("file", st.files, "Unitary dqta file")->required()->expected(1));
  name->add_option("--src", st.src, "Dimension of K")->required();
  name->add_option("-o,--output", st.output, "Output file")->required();

  auto* cell = app.add_subcommand("cell", "Build a one-cell Turing automaton");
  cell->add_option("--states", st.states, "Machine states S")->required()->check(CLI::PositiveNumber);
  cell->add_option("--bits", st.bits, "Alphabet bits B")->required()->check(CLI::Range(0, 12));
  auto* rule_opt = existing(cell->add_option("--rule", st.rule, "Rule file"));
  cell->add_option("--preset", st.preset, "Built-in rule")
      ->check(CLI::IsMember({"identity", "toggle-bounce"}))
      ->excludes(rule_opt);
  cell->add_option("-o,--output", st.output, "Output file")->required();

  auto* chain = app.add_subcommand("chain", "Chain copies of a labelled cell");
  existing(chain->add_option("file", st.files, "Cell dqta file")->required()->expected(1));
  chain->add_option("--n", st.n, "Number of cells")->required()->check(CLI::PositiveNumber);
  chain->add_flag("--mirror", st.mirror, "Send (L,i) outputs to the right neighbour");
  chain->add_flag("--ring", st.ring, "Close the segment into a ring");
  chain->add_option("-o,--output", st.output, "Output file")->required();

  auto* sim = app.add_subcommand("simulate", "Iterate a qta from a basis state");
  existing(sim->add_option("file", st.files, "qta file")->required()->expected(1));
  sim->add_option("--steps", st.steps, "Number of steps")->required();
  sim->add_option("--start", st.start, "Starting interface index (0-based)");
  sim->add_option("--state", st.start_state, "Starting basis state of H (0-based)");

  auto* ax = app.add_subcommand("axioms", "Run the seeded law checks");
  ax->add_option("--seed", st.cfg.seed, "Base seed");
  ax->add_option("--instances", st.cfg.instances, "Instances per law");
  ax->add_option("--max-dim", st.cfg.max_dim, "Largest interface dimension")
      ->check(CLI::PositiveNumber);
  ax->add_option("--tol", st.cfg.tolerance, "Tolerance")->check(CLI::PositiveNumber);
  ax->add_option("--laws", st.laws, "Law sets")->delimiter(',')->check(CLI::IsMember(law_sets()));
  ax->add_option("--report", st.report, "Write the report here instead of stdout");
  auto* replay_opt = ax->add_option("--replay", st.replay_law, "Replay one instance of a law");
  ax->add_option_function<std::uint64_t>(
        "--at", [&](const std::uint64_t& s) { st.replay_seed = s, st.replay_seed_set = true; },
        "Seed of the replayed instance")
      ->needs(replay_opt);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 2;
  }

  try {
    if (validate->parsed()) return detail::cmd_validate(st, out);
    if (compose->parsed()) return detail::cmd_compose(st, out);
    if (tensor->parsed()) return detail::cmd_tensor(st, out);
    if (feedback->parsed()) return detail::cmd_feedback(st, out);
    if (bidir->parsed()) return detail::cmd_bidir(st, out);
    if (name->parsed()) return detail::cmd_name(st, out);
    if (cell->parsed()) return detail::cmd_cell(st, out);
    if (chain->parsed()) return detail::cmd_chain(st, out);
    if (sim->parsed()) return detail::cmd_simulate(st, out);
    if (ax->parsed()) return detail::cmd_axioms(st, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace qturing
