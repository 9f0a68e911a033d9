#include "CLI11.hpp"
#include "lipgeo/ingest.hpp"
#include "lipgeo/report.hpp"
#include "lipgeo/snk_io.hpp"
#include "lipgeo/surgery.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace lipgeo;

namespace {

enum Exit { Ok = 0, Usage = 1, Invalid = 2, Undecided = 3 };

struct Failure : std::runtime_error {
    Failure(const std::string& what, int code) : std::runtime_error(what), code(code) {}
    int code;
};

struct Options {
    std::string format = "text";
    std::string out;
    double tolerance = 0.05;
};

void require_format(const Options& o, std::initializer_list<const char*> allowed) {
    for (auto f : allowed)
        if (o.format == f) return;
    throw Failure("format " + o.format + " is not available for this command", Usage);
}

LinkModel load_valid(const std::string& path) {
    auto m = load_snk(path);
    auto report = validate(m);
    if (!report.ok()) {
        std::string msg = path + ": invalid model";
        for (auto& v : report.violations) msg += "\n  " + v;
        throw Failure(msg, Invalid);
    }
    return m;
}

std::string cmd_analyze(const Options& o, const std::string& path) {
    require_format(o, {"text", "json", "dot"});
    auto r = analyze(load_valid(path));
    if (o.format == "json") return to_json(r).dump(2) + "\n";
    if (o.format == "dot") return to_dot(r);
    return to_text(r);
}

std::string cmd_render(const Options& o, const std::string& path) {
    require_format(o, {"text", "dot"});
    return to_dot(analyze(load_valid(path)));
}

std::string cmd_pizza(const Options& o, const std::string& path, const std::string& pancake, const std::string& target,
                      bool raw) {
    require_format(o, {"text", "json"});
    Geometry g(load_valid(path));
    const std::size_t j = g.pancake_index(pancake);
    std::vector<std::size_t> targets;
    if (target.empty())
        for (std::size_t k = 0; k < g.model().pancakes.size(); ++k) targets.push_back(k);
    else
        targets.push_back(g.pancake_index(target));
    std::string text;
    Json all = Json::array();
    for (auto k : targets) {
        OrderFunction f(g, j, k);
        Pizza p = raw ? pizza_decomposition(f) : minimal_pizza(f);
        text += to_text(f, p);
        all.push_back(to_json(f, p));
    }
    if (o.format == "json") return (target.empty() ? all : all[0]).dump(2) + "\n";
    return text;
}

std::string cmd_surgery(const Options& o, const std::string& path, int remove, int cut, const std::string& alpha) {
    require_format(o, {"text", "json"});
    if ((remove > 0) == (cut > 0)) throw Failure("give exactly one of --remove-segment and --cut-nodal", Usage);
    auto m = intrinsic_decomposition(load_valid(path));
    SurgeryResult r;
    bool criterion = false;
    if (remove > 0) {
        r = remove_segment(m, remove);
        criterion = criterion_remove_segment(m, remove);
    } else {
        auto a = ExpQ::parse(alpha);
        if (!a) throw Failure("--cut-nodal needs --alpha <exponent>", Usage);
        r = cut_nodal(m, cut, *a);
        criterion = criterion_cut_nodal(m, cut, *a);
    }
    const std::string cls = to_string(recognize(r.model).cls);
    if (o.format == "json")
        return Json{{"criterion", criterion}, {"recognized", cls}, {"model", print_snk(r.model)}}.dump(2) + "\n";
    return print_snk(r.model) + "criterion=" + (criterion ? "true" : "false") + " recognized=" + cls + "\n";
}

std::string cmd_ingest(const Options& o, const std::string& path) {
    require_format(o, {"text"});
    auto s = load_germ(path);
    auto m = build_linkmodel(s);
    auto check = cross_validate(s, m, o.tolerance);
    if (!check.ok()) {
        std::string msg = path + ": numeric cross-check failed";
        for (auto& p : check.mismatches())
            msg += "\n  " + p.a + "," + p.b + " symbolic " + p.symbolic.str() + " numeric " + fixed(p.numeric);
        throw Failure(msg, Invalid);
    }
    return print_snk(m);
}

std::string cmd_oracle(const Options& o, const std::string& path, const std::string& pair) {
    require_format(o, {"text", "json"});
    auto comma = pair.find(',');
    if (comma == std::string::npos) throw Failure("--pair expects a,b", Usage);
    const std::string a = pair.substr(0, comma), b = pair.substr(comma + 1);
    auto s = load_germ(path);
    auto est = numeric_tord(s, a, b);
    ExpQ sym = tord_arcs(s.arc(a), s.arc(b));
    bool agree = sym.is_inf() ? std::isinf(est.slope) : std::abs(est.slope - sym.to_double()) <= o.tolerance;
    if (o.format == "json")
        return Json{{"pair", {a, b}},
                    {"symbolic", sym.str()},
                    {"slope", fixed(est.slope)},
                    {"residual", fixed(est.residual, 6)},
                    {"agree", agree}}
                   .dump(2) +
               "\n";
    return "pair " + a + "," + b + " symbolic " + sym.str() + " slope=" + fixed(est.slope) + " residual " +
           fixed(est.residual, 6) + (agree ? " agree" : " DISAGREE") + "\n";
}

std::string cmd_validate(const Options& o, const std::string& path, int& code) {
    require_format(o, {"text", "json"});
    auto r = validate(load_snk(path));
    code = r.ok() ? Ok : Invalid;
    if (o.format == "json") return Json{{"ok", r.ok()}, {"violations", r.violations}}.dump(2) + "\n";
    if (r.ok()) return "ok\n";
    std::string text;
    for (auto& v : r.violations) text += v + "\n";
    return text;
}

// Writes through a temporary so that a failed run leaves no partial file.
void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    const std::string tmp = out + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        f << text;
        if (!f) throw Failure("cannot write " + out, Usage);
    }
    if (std::rename(tmp.c_str(), out.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Failure("cannot write " + out, Usage);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outer Lipschitz invariants of surface germs given as link models"};
    app.fallthrough();
    app.require_subcommand(1);
    Options o;
    app.add_option("--format", o.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
    app.add_option("-o,--out", o.out, "write the result to this file");
    app.add_option("--tolerance", o.tolerance, "numeric agreement tolerance")->check(CLI::PositiveNumber);

    std::string path, pancake, target, alpha, pair;
    int remove = 0, cut = 0;
    bool raw = false;

    auto* analyze_cmd = app.add_subcommand("analyze", "class, zones, multiplicities and nodes of a .snk model");
    analyze_cmd->add_option("model", path)->required();
    auto* render_cmd = app.add_subcommand("render", "DOT diagram of the link");
    render_cmd->add_option("model", path)->required();
    auto* pizza_cmd = app.add_subcommand("pizza", "minimal pizza of tord to a target pancake");
    pizza_cmd->add_option("model", path)->required();
    pizza_cmd->add_option("--pancake", pancake)->required();
    pizza_cmd->add_option("--target", target, "omit for every pancake");
    pizza_cmd->add_flag("--raw", raw, "elementary slices, before merging");
    auto* surgery_cmd = app.add_subcommand("surgery", "remove a segment or cut a nodal zone");
    surgery_cmd->add_option("model", path)->required();
    surgery_cmd->add_option("--remove-segment", remove)->check(CLI::PositiveNumber);
    surgery_cmd->add_option("--cut-nodal", cut)->check(CLI::PositiveNumber);
    surgery_cmd->add_option("--alpha", alpha);
    auto* ingest_cmd = app.add_subcommand("ingest", "build a .snk model from a .germ surface");
    ingest_cmd->add_option("surface", path)->required();
    auto* oracle_cmd = app.add_subcommand("oracle", "numeric tord of two arcs of a .germ surface");
    oracle_cmd->add_option("surface", path)->required();
    oracle_cmd->add_option("--pair", pair)->required();
    auto* validate_cmd = app.add_subcommand("validate", "check a .snk model");
    validate_cmd->add_option("model", path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? Ok : Usage;
    }

    try {
        int code = Ok;
        std::string text;
        if (analyze_cmd->parsed())
            text = cmd_analyze(o, path);
        else if (render_cmd->parsed())
            text = cmd_render(o, path);
        else if (pizza_cmd->parsed())
            text = cmd_pizza(o, path, pancake, target, raw);
        else if (surgery_cmd->parsed())
            text = cmd_surgery(o, path, remove, cut, alpha);
        else if (ingest_cmd->parsed())
            text = cmd_ingest(o, path);
        else if (oracle_cmd->parsed())
            text = cmd_oracle(o, path, pair);
        else if (validate_cmd->parsed())
            text = cmd_validate(o, path, code);
        emit(text, o.out);
        return code;
    } catch (const Failure& e) {
        std::cerr << "lipgeo: " << e.what() << "\n";
        return e.code;
    } catch (const Indeterminate& e) {
        std::cerr << "lipgeo: indeterminate: " << e.what() << "\n";
        return Undecided;
    } catch (const ParseError& e) {
        std::cerr << "lipgeo: " << path << ": " << e.what() << "\n";
        return Invalid;
    } catch (const std::exception& e) {
        std::cerr << "lipgeo: " << e.what() << "\n";
        return Invalid;
    }
}
