#include "nonlocalbox/io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nlb {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* field) {
    if (!j.contains(field))
        throw ParseError(std::string("missing field '") + field + "'");
    const json& v = j.at(field);
    if (!v.is_number())
        throw ParseError(std::string("field '") + field +
                         "' must be a number");
    return v.get<double>();
}

std::array<double, 4> require_quad(const json& j, const char* field) {
    if (!j.contains(field))
        throw ParseError(std::string("missing field '") + field + "'");
    const json& v = j.at(field);
    if (!v.is_array() || v.size() != 4)
        throw ParseError(std::string("field '") + field +
                         "' must be an array of 4 numbers");
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (!v[i].is_number())
            throw ParseError(std::string("field '") + field + "' entry " +
                             std::to_string(i) + " must be a number");
        out[i] = v[i].get<double>();
    }
    return out;
}

json quad(const std::array<double, 4>& a) {
    return json::array({a[0], a[1], a[2], a[3]});
}

json grid(const double (&m)[2][2]) {
    return json::array({json::array({m[0][0], m[0][1]}),
                        json::array({m[1][0], m[1][1]})});
}

} // namespace

const char* to_string(BoxFormat f) {
    switch (f) {
    case BoxFormat::full:
        return "full";
    case BoxFormat::ns_params:
        return "ns_params";
    case BoxFormat::equal_bias:
        return "equal_bias";
    }
    return "?";
}

LoadedBox box_from_json(const json& j, double tolerance) {
    if (!j.is_object())
        throw ParseError("box document must be a JSON object");
    if (!j.contains("format"))
        throw ParseError("missing field 'format'");
    if (!j.at("format").is_string())
        throw ParseError("field 'format' must be a string");
    std::string format = j.at("format").get<std::string>();

    LoadedBox out;
    if (format == "full") {
        const char* field = "probabilities";
        if (!j.contains(field))
            throw ParseError("missing field 'probabilities'");
        const json& rows = j.at(field);
        if (!rows.is_array() || rows.size() != 4)
            throw ParseError(
                "field 'probabilities' must be an array of 4 rows");
        std::array<double, 16> flat{};
        for (std::size_t r = 0; r < 4; ++r) {
            const json& row = rows[r];
            if (!row.is_array() || row.size() != 4)
                throw ParseError("field 'probabilities' row " +
                                 std::to_string(r) +
                                 " must be an array of 4 numbers");
            for (std::size_t c = 0; c < 4; ++c) {
                if (!row[c].is_number())
                    throw ParseError("field 'probabilities' entry (" +
                                     std::to_string(r) + "," +
                                     std::to_string(c) +
                                     ") must be a number");
                flat[r * 4 + c] = row[c].get<double>();
            }
        }
        out.box = CorrelationBox(flat, tolerance);
        out.format = BoxFormat::full;
    } else if (format == "ns_params") {
        NsParams p;
        p.m1 = require_number(j, "m1");
        p.m2 = require_number(j, "m2");
        p.n1 = require_number(j, "n1");
        p.n2 = require_number(j, "n2");
        p.c = require_quad(j, "c");
        out.box = box_from_ns_params(p, tolerance);
        out.format = BoxFormat::ns_params;
        out.params = p;
    } else if (format == "equal_bias") {
        EqualBiasBox b;
        b.p = require_number(j, "p");
        b.c = require_quad(j, "c");
        out.box = box_from_equal_bias(b, tolerance);
        out.format = BoxFormat::equal_bias;
        out.params = b.as_ns_params();
        out.equal_bias = b;
    } else {
        throw ParseError("field 'format' must be one of full, ns_params, "
                         "equal_bias; got '" +
                         format + "'");
    }
    out.box.validate();
    return out;
}

LoadedBox load_box(const std::string& path, double tolerance) {
    return box_from_json(read_json_file(path), tolerance);
}

json box_to_json(const CorrelationBox& box) {
    json rows = json::array();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            rows.push_back(quad(box.row(x, y)));
    return json{{"format", "full"}, {"probabilities", rows}};
}

json box_to_json(const NsParams& p) {
    return json{{"format", "ns_params"}, {"m1", p.m1}, {"m2", p.m2},
                {"n1", p.n1},            {"n2", p.n2}, {"c", quad(p.c)}};
}

json box_to_json(const EqualBiasBox& b) {
    return json{{"format", "equal_bias"}, {"p", b.p}, {"c", quad(b.c)}};
}

json to_json(const CriterionReport& r) {
    json lhs = json::array();
    for (double v : r.lhs)
        lhs.push_back(v);
    json inter = json::object();
    for (const auto& [k, v] : r.intermediates)
        inter[k] = v;
    return json{{"kind", to_string(r.kind)},
                {"label", r.label},
                {"lhs", lhs},
                {"bound", r.bound},
                {"margin", r.margin},
                {"satisfied", r.satisfied},
                {"intermediates", inter}};
}

json to_json(const BiasMaxResult& r) {
    json j{{"p_star", r.p_star},
           {"bias_percent", r.bias_percent},
           {"chsh_value", r.chsh_value},
           {"chsh_target", r.chsh_target},
           {"method", r.method},
           {"seed", r.seed},
           {"extremal_params", box_to_json(r.extremal_params)},
           {"report", to_json(r.report)},
           {"distance_to_quantum",
            json{{"max_abs", r.distance_to_quantum.max_abs},
                 {"total_variation", r.distance_to_quantum.total_variation}}}};
    j["extremal_box"] =
        r.extremal_box ? box_to_json(*r.extremal_box) : json(nullptr);
    return j;
}

json to_json(const MacroResult& r) {
    return json{{"pairs_per_run", r.config.pairs_per_run},
                {"runs", r.config.runs},
                {"seed", r.config.seed},
                {"d_hat", grid(r.d_hat)},
                {"sign_corr", grid(r.sign_corr)},
                {"sign_stderr", grid(r.sign_stderr)},
                {"mean_n0_alice", grid(r.mean_n0_alice)},
                {"mean_n0_bob", grid(r.mean_n0_bob)},
                {"sign_chsh", r.sign_chsh},
                {"stderr_sign_chsh", r.stderr_sign_chsh}};
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot open " + path + " for writing");
    f << j.dump(2) << '\n';
    if (!f)
        throw IoError("error writing " + path);
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot open " + path);
    json j = json::parse(f, nullptr, false);
    if (j.is_discarded())
        throw ParseError("invalid JSON in " + path);
    return j;
}

void write_box_csv(const CorrelationBox& box, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw IoError("cannot open " + path + " for writing");
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            auto row = box.row(x, y);
            std::fprintf(f, "%.6f,%.6f,%.6f,%.6f\n", row[0], row[1], row[2],
                         row[3]);
        }
    if (std::fclose(f) != 0)
        throw IoError("error closing " + path);
}

std::string box_table(const CorrelationBox& box) {
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%4s  %10s %10s %10s %10s\n", "xy",
                  "P(00)", "P(01)", "P(10)", "P(11)");
    out << buf;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            auto row = box.row(x, y);
            std::snprintf(buf, sizeof buf,
                          "  %d%d  %10.6f %10.6f %10.6f %10.6f\n", x, y,
                          row[0], row[1], row[2], row[3]);
            out << buf;
        }
    return out.str();
}

} // namespace nlb
