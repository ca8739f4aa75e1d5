#include "sysmat/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "sysmat/error.hpp"
#include "sysmat/io.hpp"
#include "sysmat/mcmillan.hpp"
#include "sysmat/minreal.hpp"
#include "sysmat/scaling.hpp"
#include "sysmat/staircase.hpp"

namespace sysmat::cli {

namespace {

using io::Json;

int exit_code(Errc code) {
  switch (code) {
    case Errc::structural_inconsistency:
    case Errc::inconsistent_deflation:
    // A already passed the regularity test, so [A, -B] cannot lose rank
    case Errc::rank_deficient_rows:
      return structural;
    case Errc::diverging_scaling:
      return divergence;
    default:
      return usage;
  }
}

double default_tol() {
  if (const char* env = std::getenv(kTolEnv)) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0.0 && std::isfinite(v)) return v;
    throw Error(Errc::invalid_argument, std::string(kTolEnv) + " is not a positive number");
  }
  return kDefaultTol;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json header(const std::string& command, const std::string& input_text, double tol,
            std::uint64_t seed) {
  Json j;
  j["tool"] = "sysmat";
  j["version"] = kVersion;
  j["command"] = command;
  j["input_digest"] = "fnv1a64:" + io::fnv1a_hex(input_text);
  j["tolerance"] = tol;
  j["seed"] = seed;
  return j;
}

Json minimality_json(const MinimalityReport& r) {
  Json off = Json::array();
  for (const auto& o : r.offending)
    off.push_back({{"side", o.side == Side::controllable ? "controllable" : "observable"},
                   {"value", o.value ? complex_json(*o.value) : Json("inf")}});
  return {{"e_controllable", r.e_controllable},
          {"e_observable", r.e_observable},
          {"strongly_minimal", r.strongly_minimal},
          {"offending", off}};
}

Json reduction_json(const SystemQuadruple& before, const MinimalReduction& red, double tol,
                    std::uint64_t seed, const std::string& order) {
  Json steps = Json::array();
  for (const ReductionRecord& rec : red.records) {
    Index finite = 0, infinite = 0;
    if (rec.d_deflated > 0) {
      const KroneckerReport x = kronecker_structure(rec.x_deflated, tol, seed);
      finite = x.finite_degree();
      infinite = x.infinite_degree();
    }
    steps.push_back({{"side", rec.side == Side::controllable ? "controllable" : "observable"},
                     {"deflated", rec.d_deflated},
                     {"finite", finite},
                     {"infinite", infinite},
                     {"ambiguous", rec.ambiguous}});
  }
  return {{"order", order},
          {"input_state_dim", before.state_dim()},
          {"output_state_dim", red.q.state_dim()},
          {"steps", steps}};
}

Json structure_json(const McMillanStructure& s) {
  Json finite = Json::array();
  for (const auto& p : s.finite_points)
    finite.push_back({{"value", complex_json(p.value)}, {"indices", p.indices}});
  return {{"rows", s.rows},
          {"cols", s.cols},
          {"normal_rank", s.normal_rank},
          {"finite", finite},
          {"infinity", s.infinity_indices},
          {"right_minimal", s.right_minimal},
          {"left_minimal", s.left_minimal},
          {"polar_degree", s.polar_degree},
          {"zero_degree", s.zero_degree},
          {"mcmillan_degree", s.mcmillan_degree},
          {"tolerance_ambiguous", s.tolerance_ambiguous}};
}

Index sum(const std::vector<Index>& v) { return std::accumulate(v.begin(), v.end(), Index{0}); }

Json matrix_block(const ComplexMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", io::matrix_to_json(m)}};
}

std::string indices_text(const std::vector<Index>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty())
    out << text;
  else
    io::write_file(path, text);
}

ReductionOrder parse_order(const std::string& s) {
  return s == "oc" ? ReductionOrder::observable_first : ReductionOrder::controllable_first;
}

struct Common {
  std::string input;
  double tol = 0.0;
  std::uint64_t seed = 0x5eed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("input", c.input, "quadruple file (JSON, schema 1)")->required();
  cmd->add_option("--tol", c.tol, "rank tolerance (default 1e-12 or $SYSMAT_TOL)");
  cmd->add_option("--seed", c.seed, "seed for normal rank tests and sample points");
}

double resolve_tol(double flag) { return flag > 0.0 ? flag : default_tol(); }

// structure -------------------------------------------------------------

struct StructureArgs {
  Common common;
  bool no_reduce = false;
  bool timing = false;
  std::string report;
  std::string format = "json";
};

int cmd_structure(const StructureArgs& a, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const double tol = resolve_tol(a.common.tol);
  const std::string text = io::read_file(a.common.input);
  const SystemQuadruple q = io::quadruple_from_json(io::parse_json(text, a.common.input));

  Json report = header("structure", text, tol, a.common.seed);
  const MinimalityReport minimality = is_strongly_minimal(q, tol, a.common.seed);
  report["minimality"] = minimality_json(minimality);
  SystemQuadruple reduced = q;
  if (a.no_reduce) {
    if (!minimality.strongly_minimal)
      throw Error(Errc::not_strongly_minimal, "input is not strongly minimal (--no-reduce given)");
  } else {
    const MinimalReduction red = strongly_minimal_reduce(q, tol, a.common.seed);
    report["reduction"] = reduction_json(q, red, tol, a.common.seed, "co");
    reduced = red.q;
  }
  const McMillanStructure s =
      rational_structure(reduced, {tol, a.common.seed, true, false});
  const bool holds = degree_sum_check(s);
  report["structure"] = structure_json(s);
  report["degree_sum"] = {{"holds", holds},
                          {"polar_degree", s.polar_degree},
                          {"zero_degree", s.zero_degree},
                          {"right_minimal_sum", sum(s.right_minimal)},
                          {"left_minimal_sum", sum(s.left_minimal)}};
  if (a.timing)
    report["timing_ms"] = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start).count();

  if (a.format == "text") {
    out << "normal rank " << s.normal_rank << ", McMillan degree " << s.mcmillan_degree << "\n";
    if (report.contains("reduction"))
      for (const auto& st : report["reduction"]["steps"])
        out << "deflated " << st["side"].get<std::string>() << ": " << st["deflated"]
            << " (finite " << st["finite"] << ", infinite " << st["infinite"] << ")\n";
    out << "finite points: " << s.finite_points.size() << "\n";
    for (const auto& p : s.finite_points)
      out << "  " << std::setprecision(17) << p.value.real() << (p.value.imag() < 0 ? " - " : " + ")
          << std::abs(p.value.imag()) << "i  " << indices_text(p.indices) << "\n";
    out << "infinity: " << indices_text(s.infinity_indices) << "\n";
    out << "right minimal indices: " << indices_text(s.right_minimal) << "\n";
    out << "left minimal indices: " << indices_text(s.left_minimal) << "\n";
    out << "degree sum: " << s.polar_degree << " = " << s.zero_degree << " + "
        << sum(s.right_minimal) << " + " << sum(s.left_minimal) << (holds ? " holds" : " FAILS")
        << "\n";
    if (!a.report.empty()) emit(report, a.report, out);
  } else {
    emit(report, a.report, out);
  }
  if (!holds) {
    err << "sysmat: structural inconsistency: degree sum " << s.polar_degree
        << " != " << s.zero_degree << " + " << sum(s.right_minimal) << " + "
        << sum(s.left_minimal) << " (try a different --tol)\n";
    return structural;
  }
  return ok;
}

// reduce ----------------------------------------------------------------

struct ReduceArgs {
  Common common;
  std::string order = "co";
  std::string output;
};

int cmd_reduce(const ReduceArgs& a, std::ostream& out, std::ostream&) {
  const double tol = resolve_tol(a.common.tol);
  const std::string text = io::read_file(a.common.input);
  const SystemQuadruple q = io::quadruple_from_json(io::parse_json(text, a.common.input));
  const MinimalReduction red = strongly_minimal_reduce(q, tol, a.common.seed, parse_order(a.order));
  Json j = io::quadruple_to_json(red.q);
  j["transform"] = {{"Wl", matrix_block(red.wl)}, {"Wr", matrix_block(red.wr)}};
  j["reduction"] = reduction_json(q, red, tol, a.common.seed, a.order);
  j["provenance"] = header("reduce", text, tol, a.common.seed);
  emit(j, a.output, out);
  return ok;
}

// scale -----------------------------------------------------------------

struct ScaleArgs {
  std::string input;
  int approach = 2;
  double alpha = 1.0;
  double c_left = 1.0;
  double c_right = 1.0;
  double c = 1.0;
  bool pow2 = false;
  bool unit_norm = false;
  bool no_lambda_scale = false;
  double tol = 1e-10;
  int max_iter = 0;
  std::string output;
  std::string format = "json";
};

Json norms_json(const RowColNorms& n) {
  return {{"row_min", n.row_min}, {"row_max", n.row_max}, {"col_min", n.col_min},
          {"col_max", n.col_max}};
}

Json vector_json(const RealVector& v) { return Json(std::vector<double>(v.begin(), v.end())); }

int cmd_scale(const ScaleArgs& a, std::ostream& out, std::ostream& err) {
  const std::string text = io::read_file(a.input);
  const Json in = io::parse_json(text, a.input);
  const Pencil p = in.contains("L0") ? io::pencil_from_json(in)
                                     : system_pencil(io::quadruple_from_json(in));
  const double d_lambda = a.no_lambda_scale ? 1.0 : default_lambda_scale(p);
  const Pencil pl = lambda_scale(p, d_lambda);
  ScalingOptions opts;
  opts.tol = a.tol;
  opts.max_iter = a.max_iter;
  ScalingResult r;
  try {
    r = a.approach == 1 ? scale_approach1(pl.l0(), pl.l1(), a.c_left, a.c_right, opts)
                        : scale_approach2(pl.l0(), pl.l1(), a.alpha, a.c, opts);
  } catch (const Error& e) {
    if (e.code() == Errc::diverging_scaling)
      err << "hint: approach 2 (--approach 2) always has a bounded solution\n";
    throw;
  }
  r.d_lambda = d_lambda;
  const RealMatrix m = build_M(pl.l0(), pl.l1());
  if (a.unit_norm) r = normalize_unit_norm(r, m);
  if (a.pow2) r = quantize_pow2(r, m);
  const Pencil scaled = apply_scaling(p, r);
  if (!r.converged) err << "sysmat: warning: scaling did not converge (residual " << r.residual << ")\n";

  Json j = io::pencil_to_json(scaled);
  Json sc = {{"approach", r.approach},
             {"d_left", vector_json(r.d_left)},
             {"d_right", vector_json(r.d_right)},
             {"d_lambda", r.d_lambda},
             {"iterations", r.iterations},
             {"residual", r.residual},
             {"converged", r.converged},
             {"pow2", a.pow2},
             {"unit_norm", a.unit_norm}};
  if (r.approach == 1) {
    sc["gamma_left"] = r.gamma_left;
    sc["gamma_right"] = r.gamma_right;
    sc["c_left"] = a.c_left;
    sc["c_right"] = a.c_right;
  } else {
    sc["gamma"] = r.gamma;
    sc["alpha"] = r.alpha;
    sc["c"] = a.c;
  }
  j["scaling"] = sc;
  const RowColNorms before = row_col_norms(lambda_scale(p, d_lambda));
  const RowColNorms after = row_col_norms(scaled);
  j["norms"] = {{"before", norms_json(before)}, {"after", norms_json(after)}};
  j["provenance"] = header("scale", text, a.tol, 0);

  if (a.format == "text") {
    out << "approach " << r.approach << ", iterations " << r.iterations << ", residual "
        << r.residual << (r.converged ? "" : " (not converged)") << "\n";
    if (r.approach == 1)
      out << "gamma_left " << r.gamma_left << ", gamma_right " << r.gamma_right << "\n";
    else
      out << "gamma " << r.gamma << "\n";
    out << "row norms " << before.row_min << " .. " << before.row_max << " -> " << after.row_min
        << " .. " << after.row_max << "\n";
    out << "col norms " << before.col_min << " .. " << before.col_max << " -> " << after.col_min
        << " .. " << after.col_max << "\n";
    if (!a.output.empty()) emit(j, a.output, out);
  } else {
    emit(j, a.output, out);
  }
  return ok;
}

// verify ----------------------------------------------------------------

struct VerifyArgs {
  Common common;
  int samples = 10;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream&) {
  const double tol = resolve_tol(a.common.tol);
  const SystemQuadruple q = io::parse_quadruple(a.common.input);
  require_regular_a(q, tol, a.common.seed);
  bool all = true;
  auto line = [&](const std::string& name, bool pass, const std::string& detail = "") {
    out << (pass ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : ": " + detail) << "\n";
    all = all && pass;
  };

  const MinimalReduction red = strongly_minimal_reduce(q, tol, a.common.seed);
  std::mt19937_64 rng(a.common.seed);
  std::normal_distribution<double> g;
  double worst = 0.0;
  int evaluated = 0;
  for (int tries = 0; evaluated < a.samples && tries < 10 * a.samples + 10; ++tries) {
    const Complex z(g(rng), g(rng));
    try {
      const ComplexMatrix r = transfer_eval(q, z, tol);
      const ComplexMatrix rc = transfer_eval(red.q, z, tol);
      const double scale = r.norm();
      const double gap = (rc - red.wl * r * red.wr).norm();
      worst = std::max(worst, scale > 0.0 ? gap / scale : gap);
      ++evaluated;
    } catch (const Error& e) {
      if (e.code() != Errc::pole_evaluation) throw;
    }
  }
  std::ostringstream gap;
  gap << "max relative gap " << worst << " over " << evaluated << " points";
  line("transfer_invariance", evaluated == a.samples && worst <= 1e-9, gap.str());

  const MinimalityReport minimal = is_strongly_minimal(red.q, tol, a.common.seed);
  line("strongly_minimal_output", minimal.strongly_minimal);
  const bool irreducible = is_strongly_irreducible(red.q, tol, a.common.seed);
  line("minimal_implies_irreducible", !minimal.strongly_minimal || irreducible);

  const McMillanStructure s = rational_structure(red.q, {tol, a.common.seed, true, false});
  line("degree_sum", degree_sum_check(s),
       std::to_string(s.polar_degree) + " = " + std::to_string(s.zero_degree) + " + " +
           std::to_string(sum(s.right_minimal)) + " + " + std::to_string(sum(s.left_minimal)));
  const Index rank_l1 = system_pencil(red.q).empty()
                            ? 0
                            : numerical_rank(system_pencil(red.q).l1(), RankTolerance::relative(tol));
  line("rank_l1_equals_degree", rank_l1 == s.mcmillan_degree,
       "rank " + std::to_string(rank_l1) + ", degree " + std::to_string(s.mcmillan_degree));
  return all ? ok : structural;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Strongly minimal reduction, balancing and McMillan structure of system pencils",
               "sysmat"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  StructureArgs sa;
  CLI::App* structure = app.add_subcommand("structure", "pole/zero/minimal-index structure");
  add_common(structure, sa.common);
  structure->add_flag("--no-reduce", sa.no_reduce, "fail instead of reducing a non-minimal input");
  structure->add_option("--report", sa.report, "write the JSON report here");
  structure->add_option("--format", sa.format)->check(CLI::IsMember({"json", "text"}));
  structure->add_flag("--timing", sa.timing, "include wall time (breaks byte-identical reports)");

  ReduceArgs ra;
  CLI::App* reduce = app.add_subcommand("reduce", "strongly minimal reduction");
  add_common(reduce, ra.common);
  reduce->add_option("--order", ra.order, "co: controllable side first")
      ->check(CLI::IsMember({"co", "oc"}));
  reduce->add_option("--output", ra.output);

  ScaleArgs ca;
  CLI::App* scale = app.add_subcommand("scale", "diagonal balancing of the system pencil");
  scale->add_option("input", ca.input, "quadruple or pencil file")->required();
  scale->add_option("--approach", ca.approach)->check(CLI::IsMember({1, 2}));
  scale->add_option("--alpha", ca.alpha)->check(CLI::PositiveNumber);
  scale->add_option("--c-left", ca.c_left)->check(CLI::PositiveNumber);
  scale->add_option("--c-right", ca.c_right)->check(CLI::PositiveNumber);
  scale->add_option("--c", ca.c)->check(CLI::PositiveNumber);
  scale->add_flag("--pow2", ca.pow2, "round scalings to powers of two");
  scale->add_flag("--unit-norm", ca.unit_norm, "rescale so row and column norms are at most 1");
  scale->add_flag("--no-lambda-scale", ca.no_lambda_scale, "keep d_lambda = 1");
  scale->add_option("--tol", ca.tol)->check(CLI::PositiveNumber);
  scale->add_option("--max-iter", ca.max_iter)->check(CLI::NonNegativeNumber);
  scale->add_option("--output", ca.output);
  scale->add_option("--format", ca.format)->check(CLI::IsMember({"json", "text"}));

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "run the invariant battery");
  add_common(verify, va.common);
  verify->add_option("--samples", va.samples)->check(CLI::PositiveNumber);

  std::vector<std::string> storage{"sysmat"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (structure->parsed()) return cmd_structure(sa, out, err);
    if (reduce->parsed()) return cmd_reduce(ra, out, err);
    if (scale->parsed()) return cmd_scale(ca, out, err);
    return cmd_verify(va, out, err);
  } catch (const Error& e) {
    err << "sysmat: error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::logic_error& e) {
    err << "sysmat: structural inconsistency: " << e.what() << "\n";
    return structural;
  }
}

}  // namespace sysmat::cli
