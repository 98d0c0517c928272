#include "cli.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cartan/cartan_pair.hpp"
#include "cartan/cocycle.hpp"
#include "cartan/convolution.hpp"
#include "cartan/error.hpp"
#include "cartan/groupoid.hpp"
#include "cartan/io.hpp"
#include "cartan/symbolic.hpp"
#include "cartan/weyl.hpp"

namespace cartan::cli {
namespace {

using io::Json;
namespace fs = std::filesystem;

constexpr const char* kComplexTag = "__complex__";

// Complex values are tagged so the text renderer can print them as a+bi.
// Components below this are rounding residue from phases like exp(iπ/2).
constexpr double kPrintSnap = 1e-15;

Json cx(Complex z) {
  auto snap = [](double x) { return std::abs(x) < kPrintSnap ? 0.0 : x; };
  return Json{{kComplexTag, io::complex_to_json({snap(z.real()), snap(z.imag())})}};
}

bool is_complex(const Json& j) { return j.is_object() && j.size() == 1 && j.contains(kComplexTag); }

Json strip_tags(const Json& j) {
  if (is_complex(j)) return j[kComplexTag];
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = strip_tags(it.value());
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(strip_tags(v));
    return out;
  }
  return j;
}

std::string scalar_text(const Json& j) {
  if (is_complex(j)) return io::format_complex({j[kComplexTag][0].get<double>(), j[kComplexTag][1].get<double>()});
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_number_float()) return io::format_real(j.get<double>());
  if (j.is_null()) return "none";
  return j.dump();
}

bool is_inline(const Json& j) {
  if (is_complex(j) || j.is_primitive()) return true;
  if (!j.is_array()) return false;
  for (const auto& v : j) {
    if (!(is_complex(v) || v.is_primitive() || (v.is_array() && is_inline(v) && v.size() <= 8))) return false;
  }
  return true;
}

std::string inline_text(const Json& j) {
  if (!j.is_array() || is_complex(j)) return scalar_text(j);
  std::string out = "[";
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (i) out += ", ";
    out += inline_text(j[i]);
  }
  return out + "]";
}

void render_text(const Json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object() && !is_complex(j)) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (is_inline(it.value())) {
        out << pad << it.key() << ": " << inline_text(it.value()) << "\n";
      } else {
        out << pad << it.key() << ":\n";
        render_text(it.value(), out, indent + 2);
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (is_inline(v)) {
        out << pad << "- " << inline_text(v) << "\n";
      } else {
        out << pad << "-\n";
        render_text(v, out, indent + 2);
      }
    }
  } else {
    out << pad << inline_text(j) << "\n";
  }
}

struct Options {
  std::string format = "text";
  std::optional<double> tolerance;
  std::optional<std::size_t> depth;
  std::string conditions;
  std::string free;
  std::string cocycle_file;
  std::vector<std::string> inputs;
};

struct Outcome {
  Json report;
  bool ok = true;
};

double tol(const Options& o, double fallback) { return o.tolerance.value_or(fallback); }

Json load(const std::string& path) { return io::load_json_file(path); }

std::shared_ptr<const FiniteGroupoid> load_groupoid(const std::string& path) {
  return std::make_shared<const FiniteGroupoid>(io::parse_groupoid(load(path)));
}

io::DocumentLoader loader_near(const std::string& path) {
  const fs::path base = fs::path(path).parent_path();
  return [base](const std::string& ref) { return io::load_json_file(base / ref); };
}

Cocycle2 as_groupoid_cocycle(io::CocycleDocument doc) {
  if (auto* fm = std::get_if<FMCocycle>(&doc)) return fm_to_groupoid(*fm);
  return std::get<Cocycle2>(std::move(doc));
}

Cocycle2 context_cocycle(const Options& o, std::shared_ptr<const FiniteGroupoid> g) {
  if (o.cocycle_file.empty()) return Cocycle2::trivial(std::move(g));
  return as_groupoid_cocycle(io::parse_cocycle(load(o.cocycle_file), loader_near(o.cocycle_file), std::move(g)));
}

Json arrow_list(const FiniteGroupoid& g, const std::vector<ArrowIndex>& arrows) {
  Json out = Json::array();
  for (ArrowIndex a : arrows) out.push_back(g.arrow_id(a));
  return out;
}

Json section_values(const FiniteGroupoid& g, const Section& f) {
  Json out = Json::array();
  for (ArrowIndex a : f.support()) out.push_back({g.arrow_id(a), cx(f[a])});
  return out;
}

Json cochain_values(const FiniteGroupoid& g, const Cochain1& c) {
  Json out = Json::array();
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) out.push_back({g.arrow_id(a), cx(c(a))});
  return out;
}

Json cocycle_values(const Cocycle2& s) {
  const auto& g = s.groupoid();
  Json out = Json::array();
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    for (ArrowIndex b : g.range_fiber(g.source(a))) {
      if (std::abs(s(a, b) - 1.0) > 1e-15) out.push_back({g.arrow_id(a), g.arrow_id(b), cx(s(a, b))});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome cmd_validate(const Options& o) {
  const Json doc = load(o.inputs.at(0));
  Outcome result;
  if (doc.is_object() && doc.contains("vertices")) {
    const GraphSpec g = io::parse_graph(doc);
    result.report["kind"] = "graph";
    result.report["vertices"] = g.vertex_count();
    result.report["edges"] = g.edge_count();
    result.report["valid"] = true;
    return result;
  }
  result.report["kind"] = "groupoid";
  if (doc.is_object() && doc.contains("type")) {
    const FiniteGroupoid g = io::parse_groupoid(doc);
    result.report["units"] = g.unit_count();
    result.report["arrows"] = g.arrow_count();
    result.report["valid"] = true;
    return result;
  }
  const auto report = validate_groupoid(io::parse_groupoid_data(doc));
  result.ok = report.empty();
  result.report["valid"] = result.ok;
  Json violations = Json::array();
  for (const auto& v : report) {
    violations.push_back({{"axiom", v.axiom}, {"witnesses", v.witnesses}, {"detail", v.detail}});
  }
  result.report["violations"] = std::move(violations);
  return result;
}

Outcome cmd_groupoid_analyze(const Options& o) {
  const auto g = load_groupoid(o.inputs.at(0));
  const AlgebraContext ctx(context_cocycle(o, g));
  Outcome result;
  Json& r = result.report;
  r["units"] = g->unit_count();
  r["arrows"] = g->arrow_count();
  Json orbits = Json::array();
  for (const auto& orbit : g->orbits()) {
    Json ids = Json::array();
    for (UnitIndex u : orbit) ids.push_back(g->unit_id(u));
    orbits.push_back(std::move(ids));
  }
  r["orbits"] = std::move(orbits);
  std::vector<ArrowIndex> nontrivial;
  for (ArrowIndex a : isotropy_bundle(*g)) {
    if (!g->is_unit_arrow(a)) nontrivial.push_back(a);
  }
  r["nontrivial_isotropy"] = arrow_list(*g, nontrivial);
  r["principal"] = is_principal(*g);
  r["essentially_principal"] = is_essentially_principal(*g);
  r["effective"] = is_effective(*g);
  r["masa"] = is_masa(ctx);
  r["regular"] = regularity_check(ctx);
  r["expectation_freedom"] = bimodular_expectation_freedom(ctx);
  if (g->arrow_count() <= 16) r["bisections"] = all_bisections(*g).size();
  if (!o.cocycle_file.empty()) r["cocycle_coboundary"] = is_coboundary(ctx.cocycle(), tol(o, 1e-12)).has_value();
  return result;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Json cycle_ids(const GraphSpec& g, const Cycle& c) {
  Json out = Json::array();
  for (EdgeIndex e : c) out.push_back(g.edge_id(e));
  return out;
}

std::string cycle_text(const GraphSpec& g, const Cycle& c) {
  std::string s = "[";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + g.edge_id(c[i]);
  return s + "]";
}

Outcome cmd_graph_check(const Options& o) {
  const GraphSpec g = io::parse_graph(load(o.inputs.at(0)));
  std::vector<std::string> wanted = split(o.conditions, ',');
  for (const auto& c : wanted) {
    if (c != "L" && c != "K" && c != "loops") throw Error("unknown condition \"" + c + "\" (expected L, K or loops)");
  }
  const bool report_all = wanted.empty();
  auto requested = [&](const std::string& c) { return std::find(wanted.begin(), wanted.end(), c) != wanted.end(); };

  Outcome result;
  Json& r = result.report;
  Json failures = Json::array();
  r["vertices"] = g.vertex_count();
  r["edges"] = g.edge_count();
  r["sink_free"] = g.sink_free();

  if (report_all || requested("L")) {
    const auto cycles = no_exit_cycles(g);
    Json cs = Json::array();
    for (const auto& c : cycles) cs.push_back(cycle_ids(g, c));
    r["condition_L"] = {{"holds", cycles.empty()}, {"no_exit_cycles", cs}};
    if (requested("L") && !cycles.empty()) failures.push_back("no-exit cycle: " + cycle_text(g, cycles.front()));
  }
  if (report_all || requested("K")) {
    const auto witness = condition_K_witness(g);
    r["condition_K"] = {{"holds", !witness}, {"witness_vertex", witness ? Json(g.vertex_id(*witness)) : Json()}};
    if (requested("K") && witness) {
      failures.push_back("vertex " + g.vertex_id(*witness) + " lies on exactly one first-return path");
    }
  }
  if (report_all || requested("loops")) {
    const auto cycle = find_cycle(g);
    r["no_loops"] = {{"holds", !cycle}, {"cycle", cycle ? cycle_ids(g, *cycle) : Json()}};
    if (requested("loops") && cycle) failures.push_back("cycle: " + cycle_text(g, *cycle));
  }
  if (!o.free.empty()) {
    const auto parts = split(o.free, ',');
    if (parts.size() != 2) throw Error("--free expects m,n");
    unsigned m = 0, n = 0;
    try {
      m = static_cast<unsigned>(std::stoul(parts[0]));
      n = static_cast<unsigned>(std::stoul(parts[1]));
    } catch (const std::exception&) {
      throw Error("--free expects two non-negative integers");
    }
    const bool holds = essential_freeness(g, m, n);
    Json entry = {{"m", m}, {"n", n}, {"holds", holds}};
    if (!holds) {
      const unsigned lag = m > n ? m - n : n - m;
      for (const auto& c : no_exit_cycles(g)) {
        if (lag % c.size() == 0) {
          entry["witness_cycle"] = cycle_ids(g, c);
          failures.push_back("X_{" + std::to_string(m) + "," + std::to_string(n) +
                             "} contains the isolated periodic point of " + cycle_text(g, c));
          break;
        }
      }
    }
    r["essential_freeness"] = std::move(entry);
  }
  if (o.depth) {
    const auto classes = dr_arrows_at_depth(g, *o.depth);
    std::size_t lagged = 0;
    for (const auto& c : classes) lagged += c.lag != 0 ? 1 : 0;
    r["dr_classes"] = {{"depth", *o.depth}, {"total", classes.size()}, {"nonzero_lag", lagged}};
  }
  result.ok = failures.empty();
  r["failures"] = std::move(failures);
  return result;
}

Outcome cmd_algebra_build(const Options& o) {
  const auto g = load_groupoid(o.inputs.at(0));
  const MatrixModel model(AlgebraContext(context_cocycle(o, g)));
  Outcome result;
  Json exported = io::matrix_model_to_json(model);
  Json blocks = exported["blocks"];
  Json labels = Json::array();
  for (const auto& l : model.labels()) labels.push_back({g->arrow_id(l.arrow), l.block, l.row, l.col, cx(l.phase)});
  result.report["blocks"] = std::move(blocks);
  result.report["labels"] = std::move(labels);
  return result;
}

Outcome cmd_algebra_norm(const Options& o) {
  if (o.inputs.size() < 2) throw Error("algebra-norm needs a groupoid file and a section file");
  const auto g = load_groupoid(o.inputs[0]);
  const AlgebraContext ctx(context_cocycle(o, g));
  const Section f = io::parse_section(load(o.inputs[1]), *g);
  Outcome result;
  Json& r = result.report;
  r["i_norm"] = i_norm(ctx, f);
  r["reduced_norm"] = reduced_norm(ctx, f);
  r["support"] = arrow_list(*g, f.support());
  r["expectation"] = section_values(*g, restriction_P(ctx, f));
  r["commutes_with_diagonal"] = commutes_with_diagonal(ctx, f, tol(o, 1e-12));
  r["normalizer"] = normalizer_membership(ctx, f, tol(o, 1e-12));
  r["support_is_bisection"] = open_support_is_bisection(ctx, f);
  return result;
}

Outcome cmd_cartan_reconstruct(const Options& o) {
  const CartanPairModel pair = io::parse_cartan_pair(load(o.inputs.at(0)));
  Outcome result;
  Json& r = result.report;
  r["dimension"] = pair.dimension();
  r["algebra_dimension"] = pair.algebra_dimension();
  r["spectrum"] = spectrum_labels(pair);
  const bool masa = masa_check(pair);
  r["masa"] = masa;
  if (!masa) {
    result.ok = false;
    r["failures"] = Json::array({"the diagonal is not maximal abelian"});
    return result;
  }
  const auto weyl = weyl_groupoid(pair);
  const auto& g = *weyl.groupoid;
  r["normalizers"] = find_normalizers(pair).size();
  r["pseudogroup_size"] = weyl_pseudogroup(pair).size();
  Json arrows = Json::array();
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    arrows.push_back({g.arrow_id(a), g.unit_id(g.range(a)), g.unit_id(g.source(a))});
  }
  r["weyl_groupoid"] = {{"units", g.unit_ids()}, {"arrows", arrows}, {"principal", is_principal(g)}};
  const Cocycle2 twist = weyl_twist(pair, weyl);
  r["twist"] = cocycle_values(twist);
  r["twist_is_coboundary"] = is_coboundary(twist).has_value();
  const auto ue = unique_extension_analysis(pair);
  const bool kernel = kernel_commutant_check(pair);
  const bool separation = separation_check(pair);
  r["kernel_commutant"] = kernel;
  r["separation"] = separation;
  r["unique_extension"] = {{"is_principal_weyl", ue.is_principal_weyl},
                           {"free_normalizer_span_equals_ker_P", ue.free_normalizer_span_equals_ker_P},
                           {"commutator_decomposition", ue.commutator_decomposition}};
  Json failures = Json::array();
  if (!kernel) failures.push_back("a normalizer with trivial germ lies outside the diagonal");
  if (!separation) failures.push_back("P(n)(x) != 0 at a moved point");
  if (!ue.free_normalizer_span_equals_ker_P) failures.push_back("ker P is not spanned by free normalizers");
  if (!ue.commutator_decomposition) failures.push_back("A != B + span[A,B]");
  result.ok = failures.empty();
  r["failures"] = std::move(failures);
  return result;
}

Outcome cmd_roundtrip(const Options& o) {
  const auto g = load_groupoid(o.inputs.at(0));
  const Cocycle2 s = context_cocycle(o, g);
  const auto check = cocycle2_check(s, tol(o, 1e-12));
  if (!check.ok) throw Error("cocycle fails the " + check.failure + " check");
  const RoundtripReport rep = roundtrip_check(s);
  Outcome result;
  Json& r = result.report;
  const bool found = rep.isomorphism.status == GroupoidIsomorphism::Status::found;
  r["isomorphism_found"] = found;
  if (found) {
    const auto weyl_units = [&] {
      const auto pair = cartan_pair_of(MatrixModel(AlgebraContext(s)));
      return weyl_groupoid(pair).groupoid;
    }();
    Json bijection = Json::array();
    for (UnitIndex u = 0; u < g->unit_count(); ++u) {
      bijection.push_back({g->unit_id(u), weyl_units->unit_id(rep.isomorphism.unit_map[u])});
    }
    r["unit_bijection"] = std::move(bijection);
  }
  r["cocycle_witness"] = rep.cocycle_witness ? cochain_values(*g, *rep.cocycle_witness) : Json();
  r["cocycle_residual"] = rep.cocycle_residual;
  r["star_isomorphism_residual"] = rep.star_isomorphism_residual;
  r["embedding_residual"] = rep.embedding_residual;
  r["diagonal_preserved"] = rep.diagonal_preserved;
  result.ok = rep.ok && (!o.tolerance || rep.star_isomorphism_residual <= *o.tolerance);
  r["ok"] = result.ok;
  return result;
}

Outcome cmd_cocycle_check(const Options& o) {
  const std::string path = o.inputs.at(0);
  auto doc = io::parse_cocycle(load(path), loader_near(path));
  Outcome result;
  Json& r = result.report;
  const double t = tol(o, 1e-12);
  if (auto* fm = std::get_if<FMCocycle>(&doc)) {
    const auto& rel = fm->relation();
    r["kind"] = "feldman-moore";
    const auto check = fm_cocycle_check(*fm, t);
    r["cocycle"] = check.ok;
    if (!check.ok) {
      Json q = Json::array();
      for (UnitIndex u : *check.counterexample) q.push_back(rel.unit_id(u));
      r["violating_quadruple"] = std::move(q);
      result.ok = false;
      return result;
    }
    const Cocycle2 s = fm_to_groupoid(*fm);
    const auto w = is_coboundary(s, t);
    r["coboundary"] = w.has_value();
    if (w) r["witness"] = cochain_values(rel, *w);
    return result;
  }
  const auto& s = std::get<Cocycle2>(doc);
  const auto& g = s.groupoid();
  r["kind"] = "groupoid";
  const auto check = cocycle2_check(s, t);
  r["cocycle"] = check.ok;
  if (!check.ok) {
    r["failure"] = check.failure;
    r["counterexample"] = arrow_list(g, check.counterexample);
    result.ok = false;
    return result;
  }
  const auto w = is_coboundary(s, t);
  r["coboundary"] = w.has_value();
  if (w) r["witness"] = cochain_values(g, *w);
  return result;
}

void emit(const std::string& command, const Options& o, Json body, std::ostream& out) {
  Json report;
  report["schema"] = "1";
  report["command"] = command;
  for (auto it = body.begin(); it != body.end(); ++it) report[it.key()] = it.value();
  if (o.format == "json") {
    out << strip_tags(report).dump(2) << "\n";
  } else {
    render_text(report, out, 0);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite groupoids, twisted convolution algebras and Cartan pairs", "cartan"};
  app.require_subcommand(1);
  Options o;

  struct Spec {
    const char* name;
    const char* help;
    std::size_t min_inputs, max_inputs;
    bool cocycle, graph;
    Outcome (*fn)(const Options&);
  };
  const Spec specs[] = {
      {"validate", "Check the groupoid axioms of a document", 1, 1, false, false, cmd_validate},
      {"groupoid-analyze", "Principality, masa and regularity of a groupoid", 1, 1, true, false, cmd_groupoid_analyze},
      {"graph-check", "Conditions (L), (K), acyclicity and essential freeness of a graph", 1, 1, false, true,
       cmd_graph_check},
      {"algebra-build", "Export the orbit-block matrix model", 1, 1, true, false, cmd_algebra_build},
      {"algebra-norm", "Norms and expectation of a section", 2, 2, true, false, cmd_algebra_norm},
      {"cartan-reconstruct", "Weyl groupoid and twist of a Cartan pair", 1, 1, false, false, cmd_cartan_reconstruct},
      {"roundtrip", "Rebuild a twisted groupoid from its Cartan pair", 1, 1, true, false, cmd_roundtrip},
      {"cocycle-check", "Check a 2-cocycle and solve for a coboundary witness", 1, 1, false, false,
       cmd_cocycle_check},
  };
  std::vector<std::pair<CLI::App*, const Spec*>> subs;
  for (const auto& spec : specs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("inputs", o.inputs, "Input documents")
        ->required()
        ->expected(static_cast<int>(spec.min_inputs), static_cast<int>(spec.max_inputs));
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--tolerance", o.tolerance, "Tolerance override")
        ->check(CLI::Range(std::numeric_limits<double>::min(), 1e-2));
    if (spec.cocycle) sub->add_option("--cocycle", o.cocycle_file, "Cocycle document");
    if (spec.graph) {
      sub->add_option("--depth", o.depth, "Cylinder depth")->check(CLI::Range(std::size_t{1}, std::size_t{64}));
      sub->add_option("--conditions", o.conditions, "Comma-separated subset of L,K,loops");
      sub->add_option("--free", o.free, "Check essential freeness of X_{m,n}");
    }
    subs.emplace_back(sub, &spec);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  for (const auto& [sub, spec] : subs) {
    if (!sub->parsed()) continue;
    try {
      Outcome outcome = spec->fn(o);
      emit(spec->name, o, std::move(outcome.report), out);
      return outcome.ok ? kOk : kPropertyFailed;
    } catch (const Error& e) {
      if (o.format == "json") {
        Json report;
        report["schema"] = "1";
        report["command"] = spec->name;
        report["error"] = {{"message", e.what()}, {"path", e.where()}};
        out << report.dump(2) << "\n";
      }
      err << "error: " << e.what();
      if (!e.where().empty()) err << " (at " << e.where() << ")";
      err << "\n";
      return kUsageError;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kUsageError;
    }
  }
  return kUsageError;
}

}  // namespace cartan::cli
