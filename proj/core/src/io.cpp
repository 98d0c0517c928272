#include "cartan/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "cartan/error.hpp"

namespace cartan::io {
namespace {

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t index) { return where + "/" + std::to_string(index); }

const Json& member(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw Error("expected an object", where);
  auto it = j.find(key);
  if (it == j.end()) throw Error("missing member \"" + key + "\"", where);
  return *it;
}

const Json& array_member(const Json& j, const std::string& key, const std::string& where) {
  const Json& v = member(j, key, where);
  if (!v.is_array()) throw Error("expected an array", at(where, key));
  return v;
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw Error("expected a string", where);
  return j.get<std::string>();
}

std::size_t as_index(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    throw Error("expected a non-negative integer", where);
  }
  return j.get<std::size_t>();
}

std::vector<std::string> string_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw Error("expected an array", where);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], at(where, i)));
  return out;
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw Error("unknown member \"" + it.key() + "\"", where);
  }
}

// Index of `name` in `names`, or a direct numeric index.
std::size_t resolve(const Json& j, const std::vector<std::string>& names, const std::string& where) {
  if (j.is_string()) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == j.get<std::string>()) return i;
    }
    throw Error("unknown name \"" + j.get<std::string>() + "\"", where);
  }
  const std::size_t i = as_index(j, where);
  if (i >= names.size()) throw Error("index out of range", where);
  return i;
}

GroupTable parse_group(const Json& j, const std::string& where) {
  GroupTable g;
  g.elements = string_list(array_member(j, "elements", where), at(where, "elements"));
  const Json& table = array_member(j, "table", where);
  for (std::size_t r = 0; r < table.size(); ++r) {
    const std::string rw = at(at(where, "table"), r);
    if (!table[r].is_array()) throw Error("expected an array", rw);
    std::vector<std::size_t> row;
    for (std::size_t c = 0; c < table[r].size(); ++c) row.push_back(resolve(table[r][c], g.elements, at(rw, c)));
    g.multiply.push_back(std::move(row));
  }
  return g;
}

template <class F>
auto wrap(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (!e.where().empty()) throw;
    throw Error(e.what(), where);
  }
}

}  // namespace

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(path.string() + ": " + e.what(), "");
  }
}

Complex parse_complex(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw Error("expected a complex number [re, im]", where);
}

Json complex_to_json(Complex z) {
  auto clean = [](double x) { return x == 0.0 ? 0.0 : x; };
  return Json::array({clean(z.real()), clean(z.imag())});
}

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s(buf);
  return s == "-0" ? "0" : s;
}

std::string format_complex(Complex z) {
  std::string re = format_real(z.real());
  std::string im = format_real(std::abs(z.imag()));
  const bool negative = z.imag() < 0.0 && im != "0";
  return re + (negative ? "-" : "+") + im + "i";
}

// ---------------------------------------------------------------------------

GroupoidData parse_groupoid_data(const Json& j, const std::string& where) {
  if (!j.is_object()) throw Error("expected a groupoid object", where);
  reject_unknown(j, {"units", "arrows", "product", "inverse", "unit_arrows"}, where);
  GroupoidData d;
  d.units = string_list(array_member(j, "units", where), at(where, "units"));
  const Json& arrows = array_member(j, "arrows", where);
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    const std::string w = at(at(where, "arrows"), i);
    d.arrows.push_back({as_string(member(arrows[i], "id", w), at(w, "id")),
                        as_string(member(arrows[i], "src", w), at(w, "src")),
                        as_string(member(arrows[i], "dst", w), at(w, "dst"))});
  }
  const Json& product = array_member(j, "product", where);
  for (std::size_t i = 0; i < product.size(); ++i) {
    const auto t = string_list(product[i], at(at(where, "product"), i));
    if (t.size() != 3) throw Error("expected [a, b, ab]", at(at(where, "product"), i));
    d.product.push_back({t[0], t[1], t[2]});
  }
  const Json& inverse = array_member(j, "inverse", where);
  for (std::size_t i = 0; i < inverse.size(); ++i) {
    const auto t = string_list(inverse[i], at(at(where, "inverse"), i));
    if (t.size() != 2) throw Error("expected [a, a_inverse]", at(at(where, "inverse"), i));
    d.inverse.emplace_back(t[0], t[1]);
  }
  if (j.contains("unit_arrows")) {
    const Json& ua = array_member(j, "unit_arrows", where);
    for (std::size_t i = 0; i < ua.size(); ++i) {
      const auto t = string_list(ua[i], at(at(where, "unit_arrows"), i));
      if (t.size() != 2) throw Error("expected [unit, arrow]", at(at(where, "unit_arrows"), i));
      d.unit_arrows.emplace_back(t[0], t[1]);
    }
  }
  return d;
}

FiniteGroupoid parse_groupoid(const Json& j, const std::string& where) {
  if (!j.is_object()) throw Error("expected a groupoid object", where);
  if (!j.contains("type")) {
    const auto data = parse_groupoid_data(j, where);
    const auto report = validate_groupoid(data);
    if (!report.empty()) {
      throw Error("invalid groupoid: " + report.front().axiom + " " + report.front().detail, where);
    }
    return FiniteGroupoid::from_data(data);
  }
  const std::string type = as_string(j["type"], at(where, "type"));
  if (type == "pair") {
    reject_unknown(j, {"type", "points"}, where);
    const auto points = string_list(array_member(j, "points", where), at(where, "points"));
    return wrap(where, [&] { return pair_groupoid(points); });
  }
  if (type == "relation") {
    reject_unknown(j, {"type", "points", "classes", "pairs"}, where);
    if (j.contains("classes")) {
      std::vector<std::vector<std::string>> classes;
      const Json& cs = array_member(j, "classes", where);
      for (std::size_t i = 0; i < cs.size(); ++i) classes.push_back(string_list(cs[i], at(at(where, "classes"), i)));
      return wrap(where, [&] { return relation_groupoid(classes); });
    }
    const auto points = string_list(array_member(j, "points", where), at(where, "points"));
    std::vector<std::pair<std::string, std::string>> pairs;
    if (j.contains("pairs")) {
      const Json& ps = array_member(j, "pairs", where);
      for (std::size_t i = 0; i < ps.size(); ++i) {
        const auto t = string_list(ps[i], at(at(where, "pairs"), i));
        if (t.size() != 2) throw Error("expected [x, y]", at(at(where, "pairs"), i));
        pairs.emplace_back(t[0], t[1]);
      }
    }
    return wrap(where, [&] { return relation_groupoid(points, pairs); });
  }
  if (type == "group" || type == "transformation") {
    const bool bare = type == "group";
    if (bare) reject_unknown(j, {"type", "elements", "table", "points"}, where);
    else reject_unknown(j, {"type", "group", "action"}, where);
    const GroupTable group = bare ? parse_group(j, where) : parse_group(member(j, "group", where), at(where, "group"));
    GroupAction action;
    if (bare) {
      // Group bundle: trivial action on the given points (default one point).
      action.points = j.contains("points") ? string_list(j["points"], at(where, "points")) : std::vector<std::string>{"*"};
      std::vector<std::size_t> id(action.points.size());
      for (std::size_t x = 0; x < id.size(); ++x) id[x] = x;
      action.act.assign(group.elements.size(), id);
    } else {
      const std::string aw = at(where, "action");
      const Json& a = member(j, "action", where);
      action.points = string_list(array_member(a, "points", aw), at(aw, "points"));
      const Json& act = array_member(a, "act", aw);
      for (std::size_t g = 0; g < act.size(); ++g) {
        const std::string rw = at(at(aw, "act"), g);
        if (!act[g].is_array()) throw Error("expected an array", rw);
        std::vector<std::size_t> row;
        for (std::size_t x = 0; x < act[g].size(); ++x) row.push_back(resolve(act[g][x], action.points, at(rw, x)));
        action.act.push_back(std::move(row));
      }
    }
    return wrap(where, [&] { return transformation_groupoid(group, action); });
  }
  if (type == "germ") {
    reject_unknown(j, {"type", "points", "generators"}, where);
    const auto points = string_list(array_member(j, "points", where), at(where, "points"));
    std::vector<PartialBijection> gens;
    const Json& gs = array_member(j, "generators", where);
    for (std::size_t i = 0; i < gs.size(); ++i) {
      const std::string gw = at(at(where, "generators"), i);
      if (!gs[i].is_array()) throw Error("expected a list of [from, to] pairs", gw);
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t k = 0; k < gs[i].size(); ++k) {
        const std::string pw = at(gw, k);
        if (!gs[i][k].is_array() || gs[i][k].size() != 2) throw Error("expected [from, to]", pw);
        pairs.emplace_back(resolve(gs[i][k][0], points, at(pw, 0)), resolve(gs[i][k][1], points, at(pw, 1)));
      }
      gens.push_back(wrap(gw, [&] { return PartialBijection::from_pairs(pairs); }));
    }
    return wrap(where, [&] { return germ_groupoid_discrete(points, gens); });
  }
  throw Error("unknown groupoid type \"" + type + "\"", at(where, "type"));
}

Json groupoid_to_json(const FiniteGroupoid& g) {
  const auto d = g.to_data();
  Json j;
  j["units"] = d.units;
  Json arrows = Json::array();
  for (const auto& a : d.arrows) arrows.push_back({{"id", a.id}, {"src", a.src}, {"dst", a.dst}});
  j["arrows"] = std::move(arrows);
  Json product = Json::array();
  for (const auto& p : d.product) product.push_back({p[0], p[1], p[2]});
  j["product"] = std::move(product);
  Json inverse = Json::array();
  for (const auto& [a, b] : d.inverse) inverse.push_back({a, b});
  j["inverse"] = std::move(inverse);
  Json ua = Json::array();
  for (const auto& [u, a] : d.unit_arrows) ua.push_back({u, a});
  j["unit_arrows"] = std::move(ua);
  return j;
}

// ---------------------------------------------------------------------------

GraphSpec parse_graph(const Json& j, const std::string& where) {
  if (!j.is_object()) throw Error("expected a graph object", where);
  reject_unknown(j, {"vertices", "edges"}, where);
  auto vertices = string_list(array_member(j, "vertices", where), at(where, "vertices"));
  std::vector<EdgeRecord> edges;
  const Json& es = array_member(j, "edges", where);
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string w = at(at(where, "edges"), i);
    edges.push_back({as_string(member(es[i], "id", w), at(w, "id")), as_string(member(es[i], "src", w), at(w, "src")),
                     as_string(member(es[i], "dst", w), at(w, "dst"))});
  }
  return wrap(where, [&] { return GraphSpec(std::move(vertices), std::move(edges)); });
}

Json graph_to_json(const GraphSpec& g) {
  Json j;
  j["vertices"] = g.vertex_ids();
  Json edges = Json::array();
  for (const auto& e : g.edge_records()) edges.push_back({{"id", e.id}, {"src", e.src}, {"dst", e.dst}});
  j["edges"] = std::move(edges);
  return j;
}

// ---------------------------------------------------------------------------

CocycleDocument parse_cocycle(const Json& j, const DocumentLoader& loader,
                              std::shared_ptr<const FiniteGroupoid> groupoid) {
  if (!j.is_object()) throw Error("expected a cocycle object", "");
  reject_unknown(j, {"groupoid", "values"}, "");
  if (!groupoid) {
    const Json& ref = member(j, "groupoid", "");
    if (ref.is_string()) {
      const Json doc = wrap("/groupoid", [&] { return loader(ref.get<std::string>()); });
      groupoid = std::make_shared<const FiniteGroupoid>(wrap("/groupoid", [&] { return parse_groupoid(doc); }));
    } else {
      groupoid = std::make_shared<const FiniteGroupoid>(parse_groupoid(ref, "/groupoid"));
    }
  }
  const auto& g = *groupoid;
  const Json& values = array_member(j, "values", "");
  const bool fm = !values.empty() && values[0].is_array() && values[0].size() == 4;
  if (fm) {
    if (!is_principal(g)) throw Error("Feldman-Moore values need a principal groupoid", "/groupoid");
    FMCocycle sigma = FMCocycle::trivial(groupoid);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::string w = at("/values", i);
      const Json& e = values[i];
      if (!e.is_array() || e.size() != 4) throw Error("expected [x, y, z, [re, im]]", w);
      std::array<UnitIndex, 3> u{};
      for (std::size_t k = 0; k < 3; ++k) {
        auto idx = g.find_unit(as_string(e[k], at(w, k)));
        if (!idx) throw Error("unknown unit", at(w, k));
        u[k] = *idx;
      }
      const Complex v = parse_complex(e[3], at(w, 3));
      wrap(w, [&] { sigma.set(u[0], u[1], u[2], v); return 0; });
    }
    return sigma;
  }
  Cocycle2 sigma = Cocycle2::trivial(groupoid);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string w = at("/values", i);
    const Json& e = values[i];
    if (!e.is_array() || e.size() != 3) throw Error("expected [a, b, [re, im]]", w);
    auto a = g.find_arrow(as_string(e[0], at(w, 0)));
    if (!a) throw Error("unknown arrow", at(w, 0));
    auto b = g.find_arrow(as_string(e[1], at(w, 1)));
    if (!b) throw Error("unknown arrow", at(w, 1));
    const Complex v = parse_complex(e[2], at(w, 2));
    wrap(w, [&] { sigma.set(*a, *b, v); return 0; });
  }
  return sigma;
}

Json cocycle_to_json(const Cocycle2& sigma) {
  const auto& g = sigma.groupoid();
  Json values = Json::array();
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    for (ArrowIndex b : g.range_fiber(g.source(a))) {
      if (sigma(a, b) != Complex(1.0)) values.push_back({g.arrow_id(a), g.arrow_id(b), complex_to_json(sigma(a, b))});
    }
  }
  Json j;
  j["groupoid"] = groupoid_to_json(g);
  j["values"] = std::move(values);
  return j;
}

Json cochain_to_json(const FiniteGroupoid& g, const Cochain1& c) {
  Json out = Json::array();
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) out.push_back({g.arrow_id(a), complex_to_json(c(a))});
  return out;
}

Section parse_section(const Json& j, const FiniteGroupoid& g, const std::string& where) {
  if (!j.is_object()) throw Error("expected a section object", where);
  reject_unknown(j, {"values"}, where);
  Section f(g.arrow_count());
  const Json& values = array_member(j, "values", where);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string w = at(at(where, "values"), i);
    const Json& e = values[i];
    if (!e.is_array() || e.size() != 2) throw Error("expected [arrowId, [re, im]]", w);
    auto a = g.find_arrow(as_string(e[0], at(w, 0)));
    if (!a) throw Error("unknown arrow", at(w, 0));
    f[*a] = parse_complex(e[1], at(w, 1));
  }
  return f;
}

Json section_to_json(const FiniteGroupoid& g, const Section& f) {
  Json values = Json::array();
  for (ArrowIndex a : f.support()) values.push_back({g.arrow_id(a), complex_to_json(f[a])});
  Json j;
  j["values"] = std::move(values);
  return j;
}

// ---------------------------------------------------------------------------

CartanPairModel parse_cartan_pair(const Json& j) {
  if (!j.is_object()) throw Error("expected a Cartan pair object", "");
  reject_unknown(j, {"blocks", "diagonal", "generators"}, "");
  std::vector<std::size_t> sizes;
  const Json& blocks = array_member(j, "blocks", "");
  if (blocks.empty()) throw Error("at least one block is required", "/blocks");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::string w = at("/blocks", b);
    const std::size_t n = as_index(member(blocks[b], "size", w), at(w, "size"));
    if (n == 0 || n > 64) throw Error("block size must be between 1 and 64", at(w, "size"));
    sizes.push_back(n);
  }
  std::size_t total = 0;
  std::vector<std::size_t> offsets;
  for (auto s : sizes) {
    offsets.push_back(total);
    total += s;
  }

  std::vector<std::vector<std::size_t>> projections;
  const Json diag = j.contains("diagonal") ? j["diagonal"] : Json("standard");
  if (diag.is_string() && diag.get<std::string>() == "standard") {
    projections = CartanPairModel::standard_projections(total);
  } else if (diag.is_string() && diag.get<std::string>() == "blockscalar") {
    projections = CartanPairModel::block_scalar_projections(sizes);
  } else if (diag.is_array()) {
    for (std::size_t x = 0; x < diag.size(); ++x) {
      const std::string w = at("/diagonal", x);
      if (!diag[x].is_array()) throw Error("expected a list of diagonal positions", w);
      std::vector<std::size_t> p;
      for (std::size_t k = 0; k < diag[x].size(); ++k) p.push_back(as_index(diag[x][k], at(w, k)));
      projections.push_back(std::move(p));
    }
  } else {
    throw Error("expected \"standard\", \"blockscalar\" or a list of projections", "/diagonal");
  }

  std::vector<ComplexMatrix> generators;
  if (j.contains("generators")) {
    const Json& gs = array_member(j, "generators", "");
    for (std::size_t k = 0; k < gs.size(); ++k) {
      const std::string w = at("/generators", k);
      if (!gs[k].is_array() || gs[k].size() != 2) throw Error("expected [block, entries]", w);
      const std::size_t b = as_index(gs[k][0], at(w, 0));
      if (b >= sizes.size()) throw Error("unknown block", at(w, 0));
      const Json& entries = gs[k][1];
      const std::size_t n = sizes[b];
      if (!entries.is_array() || entries.size() != n * n) {
        throw Error("expected " + std::to_string(n * n) + " entries in row-major order", at(w, 1));
      }
      ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          m(static_cast<Eigen::Index>(offsets[b] + r), static_cast<Eigen::Index>(offsets[b] + c)) =
              parse_complex(entries[r * n + c], at(at(w, 1), r * n + c));
        }
      }
      generators.push_back(std::move(m));
    }
  }
  return CartanPairModel(std::move(sizes), std::move(projections), generators);
}

Json matrix_model_to_json(const MatrixModel& model) {
  const auto& g = model.context().groupoid();
  Json blocks = Json::array();
  for (const auto& b : model.blocks()) {
    Json units = Json::array();
    for (UnitIndex u : b.units) units.push_back(g.unit_id(u));
    blocks.push_back({{"units", std::move(units)}, {"size", b.basis.size()}});
  }
  Json labels = Json::array();
  for (const auto& l : model.labels()) {
    labels.push_back({g.arrow_id(l.arrow), l.block, l.row, l.col, complex_to_json(l.phase)});
  }
  Json j;
  j["blocks"] = std::move(blocks);
  j["labels"] = std::move(labels);
  return j;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace cartan::io
