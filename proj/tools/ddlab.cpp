#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <ddlab/ddlab.hpp>
#include <ddlab/io.hpp>

using namespace ddlab;

namespace
{

constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

struct Options {
    std::string order = "grevlex";
    std::size_t budget = 100000;
    int cap = 64;
    bool json = false;
    std::string out;
    unsigned jobs = 1;

    MonomialOrder::Kind order_kind() const
    {
        return order == "lex" ? MonomialOrder::Kind::lex : MonomialOrder::Kind::grevlex;
    }
};

struct Outcome {
    json doc = json::object();
    std::string text;
    int status = 0;
};

std::string render(const Report &r, const std::string &indent = "  ")
{
    std::ostringstream os;
    for (const auto &c : r.checks) {
        const char *tag = c.passed ? "[ok]  " : (c.required ? "[FAIL]" : "[info]");
        os << indent << tag << " " << c.name;
        if (!c.detail.empty()) {
            os << ": " << c.detail;
        }
        os << "\n";
    }
    return os.str();
}

Outcome from_report(const Report &r, json doc = json::object())
{
    Outcome o;
    doc["report"] = to_json(r);
    o.doc = std::move(doc);
    o.text = render(r);
    o.status = r.passed() ? 0 : kExitFailed;
    return o;
}

// Runs the validation report first; an invalid presentation ends the command with failed checks.
bool invalid_outcome(const DDPresentation &p, Outcome &o)
{
    const auto val = validate_presentation(p);
    if (val.passed()) {
        return false;
    }
    o = from_report(val, {{"presentation", to_json(p)}});
    o.text = "invalid presentation\n" + o.text;
    return true;
}

Outcome guarded(const std::string &input, const std::function<Outcome()> &fn)
{
    Outcome o;
    try {
        o = fn();
    } catch (const input_error &ex) {
        o.status = kExitInput;
        o.doc = {{"error", ex.what()}};
        o.text = std::string("error: ") + ex.what() + "\n";
    } catch (const parse_error &ex) {
        o.status = kExitInput;
        o.doc = {{"error", ex.what()}};
        o.text = std::string("error: ") + ex.what() + "\n";
    } catch (const error &ex) {
        o.status = kExitFailed;
        o.doc = {{"error", ex.what()}};
        o.text = std::string("failed: ") + ex.what() + "\n";
    }
    o.doc["input"] = input;
    o.doc["status"] = o.status;
    return o;
}

int emit(const std::string &command, const std::vector<std::string> &inputs, const std::vector<Outcome> &outs,
         const Options &opt)
{
    int status = 0;
    json results = json::array();
    for (const auto &o : outs) {
        status = std::max(status, o.status);
        results.push_back(o.doc);
    }
    json doc = {{"schema", kSchema}, {"command", command}, {"status", status}, {"results", results}};
    if (opt.json) {
        std::cout << doc.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < outs.size(); ++i) {
            if (outs.size() > 1) {
                std::cout << "== " << inputs[i] << " ==\n";
            }
            (outs[i].status == kExitInput ? std::cerr : std::cout) << outs[i].text;
        }
    }
    if (!opt.out.empty()) {
        std::ofstream f(opt.out);
        if (!f) {
            std::cerr << "error: cannot write '" << opt.out << "'\n";
            return kExitInput;
        }
        f << doc.dump(2) << "\n";
    }
    return status;
}

// One outcome per input file, computed on up to opt.jobs threads; results keep the input order.
int for_each_file(const std::string &command, const std::vector<std::string> &files, const Options &opt,
                  const std::function<Outcome(const DDPresentation &)> &fn)
{
    std::vector<Outcome> outs(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            outs[i] = guarded(files[i], [&] { return fn(load_presentation(files[i])); });
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(files.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }
    return emit(command, files, outs, opt);
}

Outcome cmd_validate(const DDPresentation &p)
{
    auto o = from_report(validate_presentation(p), {{"presentation", to_json(p)}});
    o.text = to_string(p) + "\n" + o.text;
    return o;
}

Outcome cmd_invariants(const DDPresentation &p)
{
    Outcome o;
    if (invalid_outcome(p, o)) {
        return o;
    }
    const auto t = invariant_tuple(p);
    o.doc = {{"presentation", to_json(p)},
             {"tuple", {{"d", t.d}, {"e", t.e}, {"r", t.r}, {"s", t.s}}},
             {"class", to_string(cond_class(p))}};
    o.text = "(d,e,r,s) = " + t.to_string() + "\n";
    return o;
}

Outcome cmd_omega3(const DDPresentation &p, const Options &opt)
{
    Outcome o;
    if (invalid_outcome(p, o)) {
        return o;
    }
    return from_report(omega3_check(p, opt.budget), {{"presentation", to_json(p)}});
}

Outcome cmd_lnd(const DDPresentation &p, const Options &opt)
{
    Outcome o;
    if (invalid_outcome(p, o)) {
        return o;
    }
    auto alg = make_algebra(p, 0, opt.order_kind(), opt.budget);
    const auto D = canonical_lnd(alg);
    Report rep = derivation_report(D);
    const auto names = generator_names(*alg);
    json images = json::object(), indices = json::object();
    std::string text;
    for (std::size_t i = 0; i < D.images.size(); ++i) {
        images[names[i]] = D.images[i].to_string();
        text += "  D(" + names[i] + ") = " + D.images[i].to_string() + "\n";
    }
    for (std::size_t i = 0; i < D.images.size(); ++i) {
        const auto nil = nilpotency_index(D, BElement::generator(alg, i), opt.cap);
        rep.add("D is nilpotent on " + names[i], !nil.cap_exceeded,
                nil.cap_exceeded ? "no zero iterate within " + std::to_string(opt.cap) + " steps"
                                 : "index " + std::to_string(nil.index));
        indices[names[i]] = nil.cap_exceeded ? json(nullptr) : json(nil.index);
    }
    o = from_report(rep, {{"presentation", to_json(p)}, {"images", images}, {"nilpotency", indices}});
    o.text = "canonical derivation:\n" + text + o.text;
    return o;
}

Outcome cmd_exp(const DDPresentation &p, const Options &opt)
{
    Outcome o;
    if (invalid_outcome(p, o)) {
        return o;
    }
    auto alg = make_algebra(p, 0, opt.order_kind(), opt.budget);
    const auto delta = exp_map(canonical_lnd(alg), opt.cap);
    const std::size_t U = alg->u_index();
    const auto names = generator_names(*alg);
    json images = json::object();
    std::string text = "exponential map of the canonical derivation:\n";
    for (std::size_t i = 0; i < delta.coefficients.size(); ++i) {
        const auto img = delta.generator_image(i, U);
        images[names[i]] = img.to_string();
        text += "  delta_U(" + names[i] + ") = " + img.to_string() + "\n";
    }
    Report rep = exp_axioms_report(delta);
    const auto ml = ml_report(p, opt.cap);
    json mlj = {{"hypotheses", to_json(ml.hypotheses)}, {"direct_facts", to_json(ml.direct_facts)}};
    if (ml.conclusion) {
        mlj["conclusion"] = *ml.conclusion;
    }
    o = from_report(rep, {{"presentation", to_json(p)}, {"images", images}, {"makar_limanov", mlj}});
    o.text = text + o.text + "Makar-Limanov invariant:\n" + render(ml.hypotheses) + render(ml.direct_facts)
             + "  " + (ml.conclusion ? *ml.conclusion : std::string("no conclusion (hypotheses fail)")) + "\n";
    return o;
}

Outcome cmd_fiber(const DDPresentation &p, const Options &opt)
{
    Outcome o;
    if (invalid_outcome(p, o)) {
        return o;
    }
    const auto gens = fiber_ideal(p, opt.order_kind(), opt.budget);
    std::string ring = "Q[z]";
    if (!p.base_vars.empty()) {
        ring = "Q[";
        for (std::size_t i = 0; i < p.base_vars.size(); ++i) {
            ring += (i ? "," : "") + p.base_vars[i];
        }
        ring += "][z]";
    }
    std::string list;
    json arr = json::array();
    for (std::size_t i = 0; i < gens.size(); ++i) {
        list += (i ? ", " : "") + gens[i].to_string();
        arr.push_back(gens[i].to_string());
    }
    o.doc = {{"presentation", to_json(p)}, {"generators", arr}};
    o.text = "xB ∩ " + ring + " generated by " + (gens.empty() ? std::string("0") : list) + "\n";
    return o;
}

Outcome cmd_member(const DDPresentation &p, const std::string &laurent, std::size_t adjoin, const Options &opt)
{
    Outcome o;
    if (invalid_outcome(p, o)) {
        return o;
    }
    auto alg = make_algebra(p, adjoin, opt.order_kind(), opt.budget);
    LaurentForm f;
    try {
        f = parse_laurent(laurent, alg->ctx(), kX);
    } catch (const parse_error &ex) {
        throw input_error(std::string("--laurent: ") + ex.what());
    }
    for (std::size_t v : {kY, kT}) {
        if (f.degree_in(v) > 0) {
            throw input_error("--laurent: Laurent forms live in R[z, w][x, 1/x] and cannot involve Y or T");
        }
    }
    const auto m = membership_with_witness(alg, f);
    o.doc = {{"presentation", to_json(p)}, {"laurent", f.to_string()}, {"member", m.member}};
    if (m.member) {
        o.doc["witness"] = m.witness->to_string();
        o.text = "member: " + f.to_string() + " = " + m.witness->to_string() + "\n";
    } else {
        o.doc["obstruction"] = m.remainder.to_string();
        o.text = "not a member: normal form of x^" + std::to_string(m.shift) + " * f is " + m.remainder.to_string() + "\n";
        o.status = kExitFailed;
    }
    return o;
}

Outcome cmd_transport(const DDPresentation &p, const std::string &iso_path)
{
    const auto data = iso_data_from_json(parse_json_text(read_file(iso_path), iso_path), p, iso_path);
    const auto res = transport_presentation(p, data);
    auto o = from_report(res.checks, {{"presentation", to_json(p)},
                                      {"iso", to_json(data)},
                                      {"target", to_json(res.target)},
                                      {"forward", images_to_json(res.forward)},
                                      {"inverse", images_to_json(res.inverse)}});
    std::string text = "target: " + to_string(res.target) + "\n";
    const auto sn = generator_names(*res.forward.src);
    for (std::size_t i = 0; i < res.forward.images.size(); ++i) {
        text += "  forward " + sn[i] + " -> " + res.forward.images[i].to_string() + "\n";
    }
    for (std::size_t i = 0; i < res.inverse.images.size(); ++i) {
        text += "  inverse " + sn[i] + "' -> " + res.inverse.images[i].to_string() + "\n";
    }
    o.text = text + o.text;
    return o;
}

Outcome cmd_iso_verify(const std::string &src_path, const std::string &tgt_path, const std::string &map_path,
                       const Options &opt)
{
    const auto src = load_presentation(src_path);
    const auto tgt = load_presentation(tgt_path);
    const json map = parse_json_text(read_file(map_path), map_path);
    if (!map.is_object() || !map.contains("forward")) {
        throw input_error(map_path + ": map file needs a \"forward\" object");
    }
    const std::size_t adjoin = map.value("adjoin", 0);
    Outcome o;
    if (invalid_outcome(src, o) || invalid_outcome(tgt, o)) {
        return o;
    }
    auto a = make_algebra(src, adjoin, opt.order_kind(), opt.budget);
    auto b = make_algebra(tgt, adjoin, opt.order_kind(), opt.budget);
    auto fwd = build_hom(a, b, images_from_json(map.at("forward"), *a, map_path + " forward"));
    Report rep;
    json doc = {{"source", to_json(src)}, {"target", to_json(tgt)}, {"forward", images_to_json(fwd)}};
    if (map.contains("inverse")) {
        auto inv = build_hom(b, a, images_from_json(map.at("inverse"), *b, map_path + " inverse"));
        rep = iso_pair_report(fwd, inv);
        doc["inverse"] = images_to_json(inv);
    } else {
        rep = hom_report(fwd);
    }
    o = from_report(rep, doc);
    o.text = std::string(map.contains("inverse") ? "isomorphism pair" : "homomorphism") + " " + to_string(src)
             + " -> " + to_string(tgt) + "\n" + o.text;
    return o;
}

Outcome cmd_distinguish(const DDPresentation &p1, const DDPresentation &p2)
{
    const auto c = distinguish_by_invariants(p1, p2);
    Outcome o;
    o.doc = to_json(c);
    o.text = render(c.hypotheses) + c.first_tuple.to_string() + " vs " + c.second_tuple.to_string() + ": "
             + c.verdict_text() + "\n";
    o.status = c.verdict == IsoVerdict::not_isomorphic ? 0 : kExitFailed;
    return o;
}

Outcome cmd_cancel(const DDPresentation &p, const Options &opt)
{
    const auto c = cancellation_certificate(p, opt.cap);
    Outcome o;
    o.doc = to_json(c);
    std::ostringstream os;
    os << to_string(p) << "\n";
    for (const auto &[name, rep] : {std::pair<const char *, const Report *>{"hypotheses", &c.hypotheses},
                                    {"omega3", &c.omega3},
                                    {"phi", &c.phi},
                                    {"invariant elements", &c.elements},
                                    {"generators", &c.generators},
                                    {"isomorphism", &c.iso}}) {
        if (!rep->checks.empty()) {
            os << name << ":\n" << render(*rep);
        }
    }
    for (const auto &[name, v] : {std::pair<const char *, const std::optional<BElement> *>{"f", &c.f}, {"g", &c.g},
                                  {"h", &c.h}, {"s", &c.s}}) {
        if (*v) {
            os << "  " << name << " = " << (*v)->to_string() << "\n";
        }
    }
    if (c.non_iso) {
        os << "non-isomorphism: " << c.non_iso->first_tuple.to_string() << " vs "
           << c.non_iso->second_tuple.to_string() << ": " << c.non_iso->verdict_text() << "\n";
    }
    for (const auto &n : c.notes) {
        os << "note: " << n << "\n";
    }
    os << "verdict: " << c.verdict() << "\n";
    o.text = os.str();
    o.status = c.certified ? 0 : kExitFailed;
    return o;
}

Outcome cmd_danielewski(const DDPresentation &p)
{
    Outcome o;
    if (invalid_outcome(p, o)) {
        return o;
    }
    const auto red = reduce_to_danielewski(p);
    json fwd = json::array(), inv = json::array();
    for (const auto &f : red.forward) {
        fwd.push_back(f.to_string());
    }
    for (const auto &f : red.inverse) {
        inv.push_back(f.to_string());
    }
    o = from_report(red.checks, {{"presentation", to_json(p)},
                                 {"target", {{"n", red.target.n}, {"F", red.target.F.to_string()}}},
                                 {"forward", fwd},
                                 {"inverse", inv}});
    o.text = "X^" + std::to_string(red.target.n) + "*T - (" + red.target.F.to_string() + ")\n" + o.text;
    return o;
}

void add_common(CLI::App *sub, Options &opt, bool multi_file)
{
    sub->add_option("--order", opt.order, "monomial order for Groebner computations")
        ->check(CLI::IsMember({"grevlex", "lex"}));
    sub->add_option("--budget", opt.budget, "reduction step budget for Groebner computations");
    sub->add_option("--cap", opt.cap, "iteration cap for nilpotency and exponential maps")->check(CLI::PositiveNumber);
    sub->add_flag("--json", opt.json, "print the JSON report");
    sub->add_option("--out", opt.out, "write the JSON report to this file");
    if (multi_file) {
        sub->add_option("--jobs", opt.jobs, "number of input files processed in parallel")->check(CLI::PositiveNumber);
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Symbolic toolkit for double Danielewski type algebras"};
    app.require_subcommand(1);
    Options opt;
    std::vector<std::string> files;
    std::string laurent, iso_path, map_path;
    std::size_t adjoin = 0;

    struct FileCommand {
        const char *name;
        const char *help;
        std::function<Outcome(const DDPresentation &)> run;
    };
    const std::vector<FileCommand> file_commands{
        {"validate", "check the presentation hypotheses", cmd_validate},
        {"invariants", "print the invariant tuple (d,e,r,s)", cmd_invariants},
        {"omega3", "check membership in the stably isomorphic subfamily", [&](auto &p) { return cmd_omega3(p, opt); }},
        {"lnd", "canonical locally nilpotent derivation and its checks", [&](auto &p) { return cmd_lnd(p, opt); }},
        {"exp", "exponential map of the canonical derivation and its axioms", [&](auto &p) { return cmd_exp(p, opt); }},
        {"fiber", "generators of xB intersected with R[z]", [&](auto &p) { return cmd_fiber(p, opt); }},
        {"cancel-cert", "stable isomorphism and non-isomorphism certificate", [&](auto &p) { return cmd_cancel(p, opt); }},
        {"danielewski-reduce", "rewrite a presentation with deg_Y Q = 1 as a Danielewski type algebra", cmd_danielewski},
    };
    std::vector<std::pair<CLI::App *, const FileCommand *>> registered;
    for (const auto &fc : file_commands) {
        auto *sub = app.add_subcommand(fc.name, fc.help);
        sub->add_option("files", files, "presentation files (JSON or key = value)")->required();
        add_common(sub, opt, true);
        registered.emplace_back(sub, &fc);
    }

    auto *member = app.add_subcommand("member", "decide membership of a Laurent form in B[W1..Wn]");
    member->add_option("file", files, "presentation file")->required()->expected(1);
    member->add_option("--laurent", laurent, "Laurent form, for example \"X^-1*(Z^2 - 1)\"")->required();
    member->add_option("--adjoin", adjoin, "number of adjoined variables W1..Wn");
    add_common(member, opt, false);

    auto *transport = app.add_subcommand("iso-transport", "transport a presentation along isomorphism data");
    transport->add_option("file", files, "presentation file")->required()->expected(1);
    transport->add_option("--iso", iso_path, "isomorphism data (JSON)")->required();
    add_common(transport, opt, false);

    auto *verify = app.add_subcommand("iso-verify", "verify a homomorphism or an isomorphism pair from a map file");
    verify->add_option("files", files, "source and target presentation files")->required()->expected(2);
    verify->add_option("--map", map_path, "map file (JSON)")->required();
    add_common(verify, opt, false);

    auto *distinguish = app.add_subcommand("distinguish", "non-isomorphism certificate from invariant tuples");
    distinguish->add_option("files", files, "two presentation files")->required()->expected(2);
    add_common(distinguish, opt, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitInput;
    }

    for (const auto &[sub, fc] : registered) {
        if (sub->parsed()) {
            return for_each_file(fc->name, files, opt, fc->run);
        }
    }
    if (member->parsed()) {
        auto o = guarded(files[0], [&] { return cmd_member(load_presentation(files[0]), laurent, adjoin, opt); });
        return emit("member", files, {o}, opt);
    }
    if (transport->parsed()) {
        auto o = guarded(files[0], [&] { return cmd_transport(load_presentation(files[0]), iso_path); });
        return emit("iso-transport", files, {o}, opt);
    }
    if (verify->parsed()) {
        auto o = guarded(files[0] + " " + files[1], [&] { return cmd_iso_verify(files[0], files[1], map_path, opt); });
        return emit("iso-verify", {files[0] + " " + files[1]}, {o}, opt);
    }
    if (distinguish->parsed()) {
        auto o = guarded(files[0] + " " + files[1],
                         [&] { return cmd_distinguish(load_presentation(files[0]), load_presentation(files[1])); });
        return emit("distinguish", {files[0] + " " + files[1]}, {o}, opt);
    }
    return kExitInput;
}
