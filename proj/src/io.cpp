#include "ivfn/io.hpp"

#include <cmath>
#include <sstream>

#include "ivfn/catalog.hpp"
#include "ivfn/errors.hpp"

namespace ivfn {

Format parse_format(std::string_view name) {
    if (name == "table") return Format::table;
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    throw UnsupportedFormat("unknown format '" + std::string(name) + "'");
}

Json number(double v) {
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

Json to_json(const Verdict& v) {
    const char* kind = v.kind == VerdictKind::converged ? "converged"
                       : v.kind == VerdictKind::diverging ? "diverging"
                                                          : "oscillating";
    return Json{{"kind", kind},  {"value", number(v.value)}, {"upper", number(v.upper)},
                {"lower", number(v.lower)}, {"tol", v.tol},        {"text", v.str()}};
}

Json to_json(const Witness& w) {
    Json j{{"origin", w.origin}, {"norm", w.norm.str()}, {"intervals", w.intervals}};
    if (w.division) {
        Json list = Json::array();
        for (const Interval& i : w.division->intervals()) list.push_back(i.str());
        j["division"] = list;
    }
    return j;
}

Json to_json(const LimitReport& r) {
    Json levels = Json::array();
    for (const LevelEstimate& l : r.levels)
        levels.push_back({{"e", l.e.str()},
                          {"upper", number(l.upper)},
                          {"lower", number(l.lower)},
                          {"upper_witness", to_json(l.upper_witness)},
                          {"lower_witness", to_json(l.lower_witness)}});
    return Json{{"quantity", r.quantity}, {"one_sided", r.one_sided}, {"verdict", to_json(r.verdict)}, {"levels", levels}};
}

Json to_json(const DensityReport& r) {
    Json j = to_json(r.report);
    j["lebesgue_ref"] = r.lebesgue_ref ? number(*r.lebesgue_ref) : Json(nullptr);
    return j;
}

namespace {

Json division_json(const RectDivision& d) {
    Json cells = Json::array();
    for (const Rect& c : d.cells()) cells.push_back(c.str());
    return Json{{"mode", to_string(d.mode())}, {"region", d.region().str()}, {"cells", cells}};
}

}  // namespace

Json to_json(const PlanarReport& r) {
    Json j = to_json(r.report);
    j["upper_division"] = r.upper_witness ? division_json(*r.upper_witness) : Json(nullptr);
    j["lower_division"] = r.lower_witness ? division_json(*r.lower_witness) : Json(nullptr);
    return j;
}

Json to_json(const VariationReport& r) {
    Json probes = Json::array();
    for (const BudgetProbe& p : r.probes) probes.push_back({{"budget", p.budget}, {"var", number(p.var)}});
    Json a = Json::array();
    for (double v : r.a_levels) a.push_back(number(v));
    Json jt = Json::array();
    for (const auto& [y, j] : r.j_table) jt.push_back({{"y", y.str()}, {"j", number(j)}});
    Json out = to_json(r.var);
    out["bounded"] = r.bounded;
    out["probes"] = probes;
    out["a_levels"] = a;
    out["a_r"] = number(r.a_r);
    out["j_table"] = jt;
    return out;
}

Json to_json(const DefectReport& r) {
    Json levels = Json::array();
    for (const DefectLevel& l : r.levels)
        levels.push_back({{"e", l.e.str()}, {"c", number(l.c)}, {"sigma", number(l.sigma)}});
    return Json{{"y", r.y.str()},
                {"c", number(r.c)},
                {"sigma", number(r.sigma)},
                {"worst", {r.worst.x.str(), r.worst.y.str(), r.worst.z.str()}},
                {"levels", levels}};
}

namespace {

template <class Level>
Json chain_levels(const std::vector<Level>& levels) {
    Json out = Json::array();
    for (const Level& l : levels)
        out.push_back({{"e", l.e.str()},
                       {"lower", number(l.lower)},
                       {"iterated_lower", number(l.iterated_lower)},
                       {"iterated_upper", number(l.iterated_upper)},
                       {"upper", number(l.upper)}});
    return out;
}

}  // namespace

Json to_json(const AroundChain& c) {
    return Json{{"holds", c.holds}, {"strict_somewhere", c.strict_somewhere}, {"levels", chain_levels(c.levels)}};
}

Json to_json(const FubiniChain& c) {
    Json levels = chain_levels(c.levels);
    for (std::size_t k = 0; k < c.levels.size(); ++k) {
        levels[k]["direct_lower"] = number(c.levels[k].direct_lower);
        levels[k]["direct_upper"] = number(c.levels[k].direct_upper);
    }
    return Json{{"holds", c.holds}, {"strict_somewhere", c.strict_somewhere}, {"levels", levels}};
}

Json to_json(const SignTable& t) {
    Json rows = Json::array();
    for (std::size_t i = 1; i <= t.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 1; j <= t.size(); ++j) row.push_back(t.entry(i, j));
        rows.push_back(row);
    }
    return Json{{"stage", t.stage()}, {"size", t.size()}, {"rows", rows}};
}

Json to_json(const StepFunction& f) {
    Json cells = Json::array();
    std::size_t n = f.values.size();
    int level = f.stage - 1;
    for (std::size_t j = 0; j < n; ++j)
        cells.push_back({{"lo", Dyadic(static_cast<std::int64_t>(j), level).str()},
                         {"hi", Dyadic(static_cast<std::int64_t>(j + 1), level).str()},
                         {"value", f.values[j].str()}});
    return Json{{"stage", f.stage}, {"rows", cells}};
}

Json fixture_manifest() {
    Json rows = Json::array();
    for (const std::string& name : fixture_names()) {
        Fixture f = fixture(name);
        Json expected = Json::array();
        for (const Expected& e : f.expected)
            expected.push_back({{"quantity", e.quantity}, {"value", number(e.value)}, {"basis", e.basis}});
        rows.push_back({{"name", f.name}, {"kind", "interval"}, {"region", f.region.str()}, {"summary", f.summary},
                        {"expected", expected}});
    }
    for (const std::string& name : planar_fixture_names()) {
        PlanarFixture f = planar_fixture(name);
        rows.push_back({{"name", f.name},
                        {"kind", "rectangle"},
                        {"region", f.region.str()},
                        {"summary", f.summary},
                        {"expected",
                         {{{"quantity", "extended_upper"}, {"value", f.extended_upper}, {"basis", "two special cells"}},
                          {{"quantity", "restricted_upper"}, {"value", f.restricted_upper}, {"basis", "one special cell"}}}}});
    }
    for (const std::string& name : fubini_fixture_names()) {
        FubiniFixture f = fubini_fixture(name);
        rows.push_back({{"name", f.name}, {"kind", "interval_pair"}, {"region", f.region.str()}, {"summary", f.summary},
                        {"expected", Json::array()}});
    }
    return Json{{"rows", rows}};
}

Json document(std::string_view kind, const Json& payload) {
    Json doc{{"schema", kSchemaVersion}, {"kind", std::string(kind)}};
    for (auto it = payload.begin(); it != payload.end(); ++it) doc[it.key()] = it.value();
    return doc;
}

namespace {

std::string scalar_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

const Json* row_array(const Json& doc) {
    for (const char* key : {"levels", "rows"})
        if (doc.contains(key) && doc[key].is_array()) return &doc[key];
    return nullptr;
}

std::vector<std::string> scalar_columns(const Json& rows) {
    std::vector<std::string> cols;
    if (rows.empty() || !rows.front().is_object()) return cols;
    for (auto it = rows.front().begin(); it != rows.front().end(); ++it)
        if (!it.value().is_structured()) cols.push_back(it.key());
    return cols;
}

void table_rows(std::ostringstream& out, const Json& rows, const std::string& indent) {
    std::vector<std::string> cols = scalar_columns(rows);
    if (cols.empty()) {
        for (const Json& r : rows) out << indent << scalar_text(r.is_structured() ? Json(r.dump()) : r) << "\n";
        return;
    }
    std::vector<std::size_t> width(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        width[c] = cols[c].size();
        for (const Json& r : rows) width[c] = std::max(width[c], scalar_text(r.value(cols[c], Json())).size());
    }
    auto line = [&](auto cell) {
        out << indent;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            std::string s = cell(c);
            out << s << std::string(width[c] - s.size() + (c + 1 < cols.size() ? 2 : 0), ' ');
        }
        out << "\n";
    };
    line([&](std::size_t c) { return cols[c]; });
    for (const Json& r : rows) line([&](std::size_t c) { return scalar_text(r.value(cols[c], Json())); });
}

void table_object(std::ostringstream& out, const Json& obj, const std::string& indent) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const Json& v = it.value();
        if (v.is_object()) {
            out << indent << it.key() << ":\n";
            table_object(out, v, indent + "  ");
        } else if (v.is_array()) {
            if (v.empty()) continue;
            out << indent << it.key() << ":\n";
            table_rows(out, v, indent + "  ");
        } else {
            out << indent << it.key() << ": " << scalar_text(v) << "\n";
        }
    }
}

}  // namespace

std::string render(const Json& doc, Format format) {
    if (format == Format::json) return doc.dump(2) + "\n";
    std::ostringstream out;
    if (format == Format::table) {
        table_object(out, doc, "");
        return out.str();
    }
    const Json* rows = row_array(doc);
    if (!rows) throw UnsupportedFormat("csv needs a document with rows");
    std::vector<std::string> cols = scalar_columns(*rows);
    if (cols.empty()) throw UnsupportedFormat("csv needs rows of scalar fields");
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << csv_field(cols[c]);
    out << "\n";
    for (const Json& r : *rows) {
        for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << csv_field(scalar_text(r.value(cols[c], Json())));
        out << "\n";
    }
    return out.str();
}

std::string limit_report_csv(const LimitReport& r) {
    std::ostringstream out;
    out << "e,upper,lower\n";
    for (const LevelEstimate& l : r.levels)
        out << l.e.str() << "," << scalar_text(number(l.upper)) << "," << scalar_text(number(l.lower)) << "\n";
    return out.str();
}

std::string sign_table_csv(const SignTable& t) {
    std::string out;
    for (std::size_t i = 1; i <= t.size(); ++i) {
        for (std::size_t j = 1; j <= t.size(); ++j) {
            if (j > 1) out += ',';
            out += t.entry(i, j) > 0 ? "1" : "-1";
        }
        out += '\n';
    }
    return out;
}

}  // namespace ivfn
