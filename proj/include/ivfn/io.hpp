#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ivfn/around_set.hpp"
#include "ivfn/density.hpp"
#include "ivfn/planar.hpp"
#include "ivfn/variation.hpp"
#include "ivfn/walsh.hpp"

namespace ivfn {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class Format { table, json, csv };
/// Throws UnsupportedFormat.
Format parse_format(std::string_view name);

/// Infinite values become "+inf" / "-inf".
Json number(double v);

Json to_json(const Verdict& v);
Json to_json(const Witness& w);
Json to_json(const LimitReport& r);
Json to_json(const DensityReport& r);
Json to_json(const PlanarReport& r);
Json to_json(const VariationReport& r);
Json to_json(const DefectReport& r);
Json to_json(const AroundChain& c);
Json to_json(const FubiniChain& c);
Json to_json(const SignTable& t);
Json to_json(const StepFunction& f);

/// Every registered fixture with its summary and expected values.
Json fixture_manifest();

/// Wraps a payload as {"schema": 1, "kind": kind, ...payload}.
Json document(std::string_view kind, const Json& payload);

/// json: indented document. table: aligned text. csv: the document's
/// "levels" or "rows" array, one line per entry, header first; throws
/// UnsupportedFormat when the document has neither.
std::string render(const Json& doc, Format format);

/// e,upper,lower rows.
std::string limit_report_csv(const LimitReport& r);
/// One line of +1/-1 per row.
std::string sign_table_csv(const SignTable& t);

}  // namespace ivfn
