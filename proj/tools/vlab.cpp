// vlab: exact computation in Thompson's group V from the command line.
//
// Exit codes: 0 success / true verdict, 1 false verdict, 2 input error,
// 3 iteration-cap diagnostic.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "vlab/demonstrative.hpp"
#include "vlab/refute.hpp"

using namespace vlab;

namespace {

long long parse_int(const std::string& s) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) throw ParseError("bad integer '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("bad integer '" + s + "'");
    }
}

struct Args {
    std::vector<std::string> pos;
    bool json = false;
    bool dot = false;
    std::string x1, x2;
    int radius = 16;
    long seed = -1;

    static Args parse(int argc, char** argv, int from) {
        Args a;
        for (int i = from; i < argc; ++i) {
            std::string s = argv[i];
            auto need_value = [&](const char* flag) -> std::string {
                if (i + 1 >= argc) throw ParseError(std::string(flag) + " needs a value");
                return argv[++i];
            };
            if (s == "--json") a.json = true;
            else if (s == "--dot") a.dot = true;
            else if (s == "--x1") a.x1 = need_value("--x1");
            else if (s == "--x2") a.x2 = need_value("--x2");
            else if (s == "--radius") a.radius = (int)parse_int(need_value("--radius"));
            else if (s == "--seed") a.seed = (long)parse_int(need_value("--seed"));
            else a.pos.push_back(std::move(s));
        }
        return a;
    }
    const std::string& at(std::size_t i, const char* what) const {
        if (i >= pos.size()) throw ParseError(std::string("missing argument: ") + what);
        return pos[i];
    }
};

DemonstrativeGroup load_group(const std::string& path) {
    nlohmann::json j;
    try {
        if (path == "-") {
            std::cin >> j;
        } else {
            std::ifstream in(path);
            if (!in) throw ParseError("cannot open group file '" + path + "'");
            in >> j;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad group file '" + path + "': " + e.what());
    }
    return group_from_json(j);
}

nlohmann::json reveal_json(const RevealingPair& p) {
    nlohmann::json j;
    j["schema"] = 1;
    j["element"] = format_element(p.element);
    j["expansion"] = format_element(Element{p.pairs});
    auto addrs = [](const std::vector<Address>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& x : v) a.push_back(format_address(x));
        return a;
    };
    j["common_leaves"] = addrs(p.common_leaves);
    j["neutral"] = addrs(p.neutral);
    j["rep_components"] = nlohmann::json::array();
    for (const auto& c : p.rep_components)
        j["rep_components"].push_back({{"root", format_address(c.root)},
                                       {"leaves", addrs(c.leaves)},
                                       {"repeller", format_address(c.repeller)},
                                       {"return_length", c.return_length}});
    j["att_components"] = nlohmann::json::array();
    for (const auto& c : p.att_components)
        j["att_components"].push_back({{"root", format_address(c.root)},
                                       {"leaves", addrs(c.leaves)},
                                       {"attractor", format_address(c.attractor)},
                                       {"return_length", c.return_length}});
    j["chains"] = nlohmann::json::array();
    for (const auto& ch : p.chains)
        j["chains"].push_back({{"source", format_address(ch.source)},
                               {"neutrals", addrs(ch.neutrals)},
                               {"sink", format_address(ch.sink)}});
    j["cycles"] = nlohmann::json::array();
    for (const auto& cyc : neutral_cycles(p)) j["cycles"].push_back(addrs(cyc));
    return j;
}

void print_reveal(const RevealingPair& p) {
    std::cout << "element: " << format_element(p.element) << "\n";
    std::cout << "expansion: " << format_element(Element{p.pairs}) << "\n";
    auto joined = [](const std::vector<Address>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_address(v[i]);
        return s.empty() ? std::string("-") : s;
    };
    std::cout << "common leaves: " << joined(p.common_leaves) << "\n";
    std::cout << "neutral leaves: " << joined(p.neutral) << "\n";
    for (const auto& c : p.rep_components)
        std::cout << "rep component: root=" << format_address(c.root) << " leaves="
                  << joined(c.leaves) << " repeller=" << format_address(c.repeller)
                  << " return=" << c.return_length << "\n";
    for (const auto& c : p.att_components)
        std::cout << "att component: root=" << format_address(c.root) << " leaves="
                  << joined(c.leaves) << " attractor=" << format_address(c.attractor)
                  << " return=" << c.return_length << "\n";
    for (const auto& ch : p.chains) {
        std::cout << "chain: " << format_address(ch.source);
        for (const auto& n : ch.neutrals) std::cout << " > " << format_address(n);
        std::cout << " > " << format_address(ch.sink) << "\n";
    }
    for (const auto& cyc : neutral_cycles(p)) {
        if (cyc.size() < 2) continue;
        std::cout << "cycle:";
        for (const auto& n : cyc) std::cout << " " << format_address(n);
        std::cout << "\n";
    }
}

std::vector<AbcLevel> parse_levels(const std::string& spec) {
    std::vector<AbcLevel> out;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ';')) {
        std::stringstream ps(part);
        std::string x, y, z;
        if (!std::getline(ps, x, ',') || !std::getline(ps, y, ',') || !std::getline(ps, z))
            throw ParseError("bad level '" + part + "' (expected x,y,z)");
        out.push_back({parse_int(x), parse_int(y), parse_int(z)});
    }
    if (out.empty()) throw ParseError("empty commutator spec");
    return out;
}

int cmd_zz(const Args& a) {
    const std::string& sub = a.at(0, "zz subcommand");
    if (sub == "reduce") {
        std::cout << format_zz(parse_zz(a.at(1, "word"))) << "\n";
        return 0;
    }
    if (sub == "commutator") {
        std::cout << format_zz(abc_commutator(parse_levels(a.at(1, "levels")))) << "\n";
        return 0;
    }
    if (sub == "tail") {
        ZZWord w = parse_zz(a.at(1, "word"));
        TailForm f = ends_in_form_star_star(w, parse_int(a.at(2, "i")), parse_int(a.at(3, "j")),
                                            parse_int(a.at(4, "k")));
        std::cout << (f == TailForm::top ? "top" : f == TailForm::bottom ? "bottom" : "none")
                  << "\n";
        return 0;
    }
    throw ParseError("unknown zz subcommand '" + sub + "'");
}

int cmd_make(const Args& a) {
    const std::string& sub = a.at(0, "make subcommand");
    DemonstrativeGroup g;
    if (sub == "cyclic") {
        const std::string& k = a.at(1, "order");
        g = (k == "inf" || k == "infinite") ? make_cyclic_infinite() : make_cyclic(parse_int(k));
    } else if (sub == "sym") {
        g = make_symmetric((int)parse_int(a.at(1, "n")));
    } else if (sub == "product") {
        g = direct_product(load_group(a.at(1, "first group file")),
                           load_group(a.at(2, "second group file")));
    } else if (sub == "move") {
        g = move_node(load_group(a.at(1, "group file")), parse_address(a.at(2, "target")));
    } else {
        throw ParseError("unknown make subcommand '" + sub + "'");
    }
    std::cout << group_to_json(g).dump(2) << "\n";
    return 0;
}

int cmd_refute(const Args& a) {
    Element alpha, beta, gamma;
    if (a.seed >= 0) {
        std::tie(alpha, beta, gamma) = refutation_instance((unsigned)a.seed);
    } else {
        alpha = parse_element(a.at(0, "alpha"));
        beta = parse_element(a.at(1, "beta"));
        gamma = parse_element(a.at(2, "gamma"));
    }
    auto cert = run_refutation(alpha, beta, gamma);
    if (a.json) {
        auto j = cert.to_json();
        j["alpha"] = format_element(alpha);
        j["beta"] = format_element(beta);
        j["gamma"] = format_element(gamma);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "kind: " << cert.kind << "\n";
        std::cout << "stage: " << cert.stage << "\n";
        std::cout << "witness word: " << format_zz(cert.witness_word) << "\n";
        std::cout << "witness element: " << format_element(cert.witness_element) << "\n";
        std::cout << "order: " << cert.order << "\n";
        std::cout << "steps: " << cert.transcript.size() << "\n";
    }
    return 0;
}

int dispatch(int argc, char** argv) {
    if (argc < 2) throw ParseError("usage: vlab <command> [args]  (see README)");
    std::string cmd = argv[1];
    Args a = Args::parse(argc, argv, 2);

    if (cmd == "reduce") {
        std::cout << format_element(parse_element(a.at(0, "element"))) << "\n";
        return 0;
    }
    if (cmd == "mul") {
        Element u = parse_element(a.at(0, "element"));
        if (a.pos.size() < 2) throw ParseError("mul needs at least two elements");
        for (std::size_t i = 1; i < a.pos.size(); ++i) u = compose(u, parse_element(a.pos[i]));
        std::cout << format_element(u) << "\n";
        return 0;
    }
    if (cmd == "inv") {
        std::cout << format_element(invert(parse_element(a.at(0, "element")))) << "\n";
        return 0;
    }
    if (cmd == "pow") {
        std::cout << format_element(
                         power(parse_element(a.at(0, "element")), parse_int(a.at(1, "exponent"))))
                  << "\n";
        return 0;
    }
    if (cmd == "eq") {
        bool same = parse_element(a.at(0, "element")) == parse_element(a.at(1, "element"));
        std::cout << (same ? "true" : "false") << "\n";
        return same ? 0 : 1;
    }
    if (cmd == "order") {
        auto k = order_of(parse_element(a.at(0, "element")));
        if (k) std::cout << *k << "\n";
        else std::cout << "infinite" << "\n";
        return 0;
    }
    if (cmd == "apply") {
        std::cout << format_point(apply(parse_element(a.at(0, "element")),
                                        parse_point(a.at(1, "point"))))
                  << "\n";
        return 0;
    }
    if (cmd == "reveal") {
        RevealingPair p = make_revealing(parse_element(a.at(0, "element")));
        if (a.json) std::cout << reveal_json(p).dump(2) << "\n";
        else print_reveal(p);
        return 0;
    }
    if (cmd == "important") {
        auto pts = important_points(parse_element(a.at(0, "element")));
        if (a.json) {
            nlohmann::json j;
            j["schema"] = 1;
            j["points"] = nlohmann::json::array();
            for (const auto& ip : pts)
                j["points"].push_back(
                    {{"point", format_point(ip.point)},
                     {"kind", ip.kind == PointKind::repelling ? "repelling" : "attracting"},
                     {"basin", format_address(ip.basin)},
                     {"log2_slope", ip.log2_slope}});
            std::cout << j.dump(2) << "\n";
        } else {
            for (const auto& ip : pts)
                std::cout << (ip.kind == PointKind::repelling ? "repelling" : "attracting")
                          << " point=" << format_point(ip.point)
                          << " log2_slope=" << ip.log2_slope
                          << " basin=" << format_address(ip.basin) << "\n";
        }
        return 0;
    }
    if (cmd == "flow") {
        FlowGraph g = flow_graph(parse_element(a.at(0, "element")));
        if (a.dot) {
            std::cout << flow_dot(g);
        } else if (a.json) {
            nlohmann::json j;
            j["schema"] = 1;
            j["components"] = nlohmann::json::array();
            for (const auto& part : g.components)
                j["components"].push_back({{"support", format_nodeset(part.support)}});
            std::cout << j.dump(2) << "\n";
        } else {
            for (const auto& part : g.components) {
                std::cout << "component " << format_nodeset(part.support) << ": rep";
                for (const auto& b : part.rep_basins) std::cout << " " << format_address(b);
                std::cout << " | att";
                for (const auto& b : part.att_basins) std::cout << " " << format_address(b);
                std::cout << "\n";
            }
        }
        return 0;
    }
    if (cmd == "support") {
        std::cout << format_nodeset(support_closure(parse_element(a.at(0, "element")))) << "\n";
        return 0;
    }
    if (cmd == "demo-check") {
        auto g = load_group(a.at(0, "group file"));
        auto r = check_demonstrative(g);
        if (a.json) {
            nlohmann::json j{{"schema", 1}, {"demonstrative", r.ok}};
            if (!r.ok) j["reason"] = r.reason;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "demonstrative: " << (r.ok ? "true" : "false") << "\n";
            if (!r.ok) std::cout << "reason: " << r.reason << "\n";
        }
        return r.ok ? 0 : 1;
    }
    if (cmd == "pingpong") {
        auto h1 = load_group(a.at(0, "first group file"));
        auto h2 = load_group(a.at(1, "second group file"));
        if (a.x1.empty() || a.x2.empty()) throw ParseError("pingpong needs --x1 and --x2");
        auto cert = pingpong_check(h1, h2, parse_nodeset(a.x1), parse_nodeset(a.x2), a.radius);
        if (a.json) {
            std::cout << cert.to_json().dump(2) << "\n";
        } else {
            std::cout << "verdict: " << (cert.verdict ? "true" : "false") << "\n";
            if (!cert.witness.empty()) std::cout << "witness: " << cert.witness << "\n";
        }
        return cert.verdict ? 0 : 1;
    }
    if (cmd == "make") return cmd_make(a);
    if (cmd == "zz") return cmd_zz(a);
    if (cmd == "refute") return cmd_refute(a);
    throw ParseError("unknown command '" + cmd + "'");
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const CapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
