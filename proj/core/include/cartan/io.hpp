#pragma once

// JSON documents. Every parse error is a cartan::Error whose where() is a
// JSON pointer into the document being read.

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "cartan/cartan_pair.hpp"
#include "cartan/cocycle.hpp"
#include "cartan/convolution.hpp"
#include "cartan/groupoid.hpp"
#include "cartan/symbolic.hpp"

namespace cartan::io {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file; errors carry the file name.
Json load_json_file(const std::filesystem::path& path);

/// [re, im] or a bare number.
Complex parse_complex(const Json& j, const std::string& where);
Json complex_to_json(Complex z);
/// "a+bi" with 12 significant digits; negative zero prints as 0.
std::string format_complex(Complex z);
std::string format_real(double x);

/// Full document {"units", "arrows", "product", "inverse", optional "unit_arrows"}.
GroupoidData parse_groupoid_data(const Json& j, const std::string& where = "");
/// Full document or a shorthand with "type": pair, relation, group,
/// transformation or germ. Throws on invalid groupoids.
FiniteGroupoid parse_groupoid(const Json& j, const std::string& where = "");
Json groupoid_to_json(const FiniteGroupoid& g);

GraphSpec parse_graph(const Json& j, const std::string& where = "");
Json graph_to_json(const GraphSpec& g);

/// Resolves "groupoid" references (strings) to documents.
using DocumentLoader = std::function<Json(const std::string&)>;

/// {"groupoid": ref-or-inline, "values": [["a","b",[re,im]], ...]} or the
/// Feldman–Moore variant with entries ["x","y","z",[re,im]] over units.
/// Omitted entries default to 1.
using CocycleDocument = std::variant<Cocycle2, FMCocycle>;
CocycleDocument parse_cocycle(const Json& j, const DocumentLoader& loader,
                              std::shared_ptr<const FiniteGroupoid> groupoid = nullptr);
Json cocycle_to_json(const Cocycle2& sigma);
Json cochain_to_json(const FiniteGroupoid& g, const Cochain1& c);

/// {"values": [["arrowId", [re,im]], ...]}; missing arrows are zero.
Section parse_section(const Json& j, const FiniteGroupoid& g, const std::string& where = "");
Json section_to_json(const FiniteGroupoid& g, const Section& f);

/// {"blocks": [{"size": n}], "diagonal": "standard" | "blockscalar" |
/// [[positions...], ...], "generators": [[block, [[re,im] ... n*n row-major]], ...]}.
CartanPairModel parse_cartan_pair(const Json& j);

/// {"blocks": [{"units", "size"}], "labels": [["arrowId", block, row, col, [re,im]]]}.
Json matrix_model_to_json(const MatrixModel& model);

Json matrix_to_json(const ComplexMatrix& m);

}  // namespace cartan::io
