#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"

#include "jensen/instance.hpp"
#include "jensen/report.hpp"
#include "jensen/uniform_convex.hpp"

namespace jensen::cli {

using Json = nlohmann::ordered_json;

[[nodiscard]] Json number(Real v);

/// Instance file reading. Errors are InputError with the source name and
/// either a line:column position or the offending field.
[[nodiscard]] Json parse_document(std::string_view text, std::string_view source);
[[nodiscard]] std::string read_source(const std::string& path);

[[nodiscard]] FunctionSpec parse_function(const Json& node, std::string_view field);
[[nodiscard]] ModulusSpec parse_modulus(const Json& node, std::string_view field);
[[nodiscard]] Interval parse_interval(const Json& node, std::string_view field);
[[nodiscard]] Instance parse_instance(const Json& doc, std::string_view source);

[[nodiscard]] Json to_json(const FunctionSpec& f);
[[nodiscard]] Json to_json(const ModulusSpec& phi);
[[nodiscard]] Json to_json(const Instance& inst);
[[nodiscard]] Json to_json(const Tolerance& tol);
[[nodiscard]] Json to_json(const BoundReport& r);
[[nodiscard]] Json to_json(const RefinementTerms& r);
[[nodiscard]] Json to_json(const Certificate& c);

/// Pretty JSON with every float at 17 significant digits, so equal values
/// always print the same bytes.
void write_json(std::ostream& os, const Json& doc);

/// Indented key/value rendering of the same tree; arrays of flat objects
/// become aligned tables.
void write_text(std::ostream& os, const Json& doc);

}  // namespace jensen::cli
