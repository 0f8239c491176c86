#ifndef DDLAB_IO_HPP
#define DDLAB_IO_HPP

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "algebra.hpp"
#include "cancellation.hpp"
#include "derivations.hpp"
#include "errors.hpp"
#include "isomorphisms.hpp"
#include "parser.hpp"
#include "presentation.hpp"
#include "report.hpp"

namespace ddlab
{

using json = nlohmann::json;

inline constexpr const char *kSchema = "dd-lab/1";

class input_error : public error
{
public:
    using error::error;
};

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw input_error("cannot open file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json parse_json_text(const std::string &text, const std::string &origin)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error &ex) {
        throw input_error(origin + ": JSON parse error at byte " + std::to_string(ex.byte) + ": " + ex.what());
    }
}

namespace detail
{

inline std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool looks_like_json(const std::string &text)
{
    const auto t = trim(text);
    return !t.empty() && t.front() == '{';
}

template <class T> T get_field(const json &j, const char *key, const std::string &origin)
{
    if (!j.contains(key)) {
        throw input_error(origin + ": missing field '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &ex) {
        throw input_error(origin + ": field '" + key + "' has the wrong type: " + ex.what());
    }
}

inline Polynomial parse_field(const std::string &text, const ContextPtr &ctx, const std::string &origin,
                              const std::string &field)
{
    try {
        return parse_poly(text, ctx);
    } catch (const parse_error &ex) {
        throw input_error(origin + ": field '" + field + "': " + ex.what());
    }
}

// key = value lines; '#' starts a comment. base_vars is a comma or space separated list.
inline json key_value_to_json(const std::string &text, const std::string &origin)
{
    json j = json::object();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw input_error(origin + ": line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key == "d" || key == "e") {
            try {
                std::size_t used = 0;
                const int v = std::stoi(value, &used);
                if (used != value.size()) {
                    throw std::invalid_argument(value);
                }
                j[key] = v;
            } catch (const std::exception &) {
                throw input_error(origin + ": line " + std::to_string(lineno) + ": '" + key + "' must be an integer");
            }
        } else if (key == "base_vars") {
            std::vector<std::string> vars;
            std::string cur;
            for (char c : value + ",") {
                if (c == ',' || c == ' ' || c == '[' || c == ']') {
                    if (!cur.empty()) {
                        vars.push_back(cur);
                    }
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            j[key] = vars;
        } else {
            j[key] = value;
        }
    }
    return j;
}

} // namespace detail

inline DDPresentation presentation_from_json(const json &j, const std::string &origin = "presentation")
{
    if (!j.is_object()) {
        throw input_error(origin + ": expected an object");
    }
    std::vector<std::string> base;
    if (j.contains("base_vars")) {
        base = detail::get_field<std::vector<std::string>>(j, "base_vars", origin);
    }
    const int d = detail::get_field<int>(j, "d", origin);
    const int e = detail::get_field<int>(j, "e", origin);
    ContextPtr ctx;
    try {
        ctx = presentation_context(base);
    } catch (const error &ex) {
        throw input_error(origin + ": " + ex.what());
    }
    const Polynomial P = detail::parse_field(detail::get_field<std::string>(j, "P", origin), ctx, origin, "P");
    const Polynomial Q = detail::parse_field(detail::get_field<std::string>(j, "Q", origin), ctx, origin, "Q");
    return DDPresentation{base, d, e, P, Q};
}

// JSON object or key = value text.
inline DDPresentation presentation_from_text(const std::string &text, const std::string &origin = "presentation")
{
    if (detail::looks_like_json(text)) {
        return presentation_from_json(parse_json_text(text, origin), origin);
    }
    return presentation_from_json(detail::key_value_to_json(text, origin), origin);
}

inline DDPresentation load_presentation(const std::string &path)
{
    return presentation_from_text(read_file(path), path);
}

inline json to_json(const DDPresentation &p)
{
    return {{"base_vars", p.base_vars}, {"d", p.d}, {"e", p.e}, {"P", p.P.to_string()}, {"Q", p.Q.to_string()}};
}

inline json to_json(const Report &r)
{
    json checks = json::array();
    for (const auto &c : r.checks) {
        json jc = {{"name", c.name}, {"passed", c.passed}, {"required", c.required}};
        if (!c.detail.empty()) {
            jc["detail"] = c.detail;
        }
        checks.push_back(jc);
    }
    return {{"passed", r.passed()}, {"checks", checks}};
}

inline Report report_from_json(const json &j)
{
    Report r;
    for (const auto &c : j.at("checks")) {
        r.add(c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.value("detail", std::string{}),
              c.value("required", true));
    }
    return r;
}

inline Rational rational_field(const json &j, const char *key, const std::string &origin)
{
    if (!j.contains(key)) {
        return 1;
    }
    const auto &v = j.at(key);
    try {
        if (v.is_number_integer()) {
            return Rational(v.get<long>());
        }
        if (v.is_string()) {
            return parse_rational(v.get<std::string>());
        }
    } catch (const std::exception &) {
    }
    throw input_error(origin + ": field '" + key + "' must be an integer or a rational string such as \"3/2\"");
}

inline IsoData iso_data_from_json(const json &j, const DDPresentation &src, const std::string &origin = "iso data")
{
    if (!j.is_object()) {
        throw input_error(origin + ": expected an object");
    }
    IsoData data = IsoData::identity(src);
    data.lambda = rational_field(j, "lambda", origin);
    data.mu = rational_field(j, "mu", origin);
    data.beta = rational_field(j, "beta", origin);
    data.g2 = rational_field(j, "g2", origin);
    auto poly = [&](const char *key, Polynomial &out) {
        if (j.contains(key)) {
            out = detail::parse_field(detail::get_field<std::string>(j, key, origin), src.ctx(), origin, key);
        }
    };
    poly("delta", data.delta);
    poly("alpha", data.alpha);
    poly("g1", data.g1);
    return data;
}

inline json to_json(const IsoData &d)
{
    return {{"lambda", ddlab::to_string(d.lambda)}, {"mu", ddlab::to_string(d.mu)}, {"beta", ddlab::to_string(d.beta)},
            {"g2", ddlab::to_string(d.g2)},         {"delta", d.delta.to_string()}, {"alpha", d.alpha.to_string()},
            {"g1", d.g1.to_string()}};
}

inline json images_to_json(const RHomomorphism &h)
{
    json out = json::object();
    const auto names = generator_names(*h.src);
    for (std::size_t i = 0; i < h.images.size(); ++i) {
        out[names[i]] = h.images[i].to_string();
    }
    return out;
}

// Generator images for a map file: {"x": "...", "y": "...", ...}; missing generators map to themselves.
inline std::vector<std::string> images_from_json(const json &j, const AlgebraContext &src, const std::string &origin)
{
    if (!j.is_object()) {
        throw input_error(origin + ": generator images must be an object");
    }
    const auto names = generator_names(src);
    std::vector<std::string> out;
    for (const auto &n : names) {
        out.push_back(j.contains(n) ? j.at(n).get<std::string>() : src.ctx()->name(out.size()));
    }
    for (const auto &[k, v] : j.items()) {
        if (std::find(names.begin(), names.end(), k) == names.end()) {
            throw input_error(origin + ": unknown generator '" + k + "'");
        }
    }
    return out;
}

inline json to_json(const NonIsoCertificate &c)
{
    return {{"first", to_json(c.first)},
            {"second", to_json(c.second)},
            {"first_tuple", c.first_tuple.to_string()},
            {"second_tuple", c.second_tuple.to_string()},
            {"hypotheses", to_json(c.hypotheses)},
            {"verdict", c.verdict_text()}};
}

inline json to_json(const CancellationCertificate &c)
{
    json j = {{"schema", kSchema},
              {"kind", "cancellation-certificate"},
              {"presentation", to_json(c.presentation)},
              {"certified", c.certified},
              {"verdict", c.verdict()}};
    if (!c.failed_step.empty()) {
        j["failed_step"] = c.failed_step;
    }
    if (c.smaller) {
        j["smaller"] = to_json(*c.smaller);
    }
    json steps = json::object();
    steps["hypotheses"] = to_json(c.hypotheses);
    steps["omega3"] = to_json(c.omega3);
    steps["phi"] = to_json(c.phi);
    steps["elements"] = to_json(c.elements);
    steps["generators"] = to_json(c.generators);
    steps["iso"] = to_json(c.iso);
    j["steps"] = steps;
    json el = json::object();
    for (const auto &[name, v] : {std::pair<const char *, const std::optional<BElement> *>{"f", &c.f}, {"g", &c.g},
                                  {"h", &c.h}, {"s", &c.s}}) {
        if (*v) {
            el[name] = (*v)->to_string();
        }
    }
    if (c.slice) {
        el["e1"] = c.slice->unit_inverse.to_string();
    }
    if (c.z_in_E) {
        el["z_in_E"] = c.z_in_E->to_string();
    }
    if (c.y_in_E) {
        el["y_in_E"] = c.y_in_E->to_string();
    }
    j["elements"] = el;
    if (c.forward) {
        j["forward"] = images_to_json(*c.forward);
    }
    if (c.inverse) {
        j["inverse"] = images_to_json(*c.inverse);
    }
    if (c.non_iso) {
        j["non_isomorphism"] = to_json(*c.non_iso);
    }
    j["notes"] = c.notes;
    return j;
}

} // namespace ddlab

#endif
