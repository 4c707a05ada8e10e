// Command-line driver: derive multiform Euler-Lagrange equations, the
// Hamiltonian and symplectic multiforms, run the structural checks, search
// for conservation laws and evaluate Poisson brackets, over hierarchies
// declared in .mf files (bundled corpus included).

#include <CLI11.hpp>

#include "multiform/multiform.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

using namespace multiform;

namespace {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_parse = 2,
    exit_degenerate = 3,  // NonDecomposable / NonOrientable
    exit_check_failed = 4,
};

struct Options {
    std::string format = "text";
    uint64_t seed = 7;
    bool seed_set = false;
};

std::string slurp(const std::string& path) {
    // a plain path first, then the bundled corpus by file name or stem
    std::ifstream in(path, std::ios::binary);
    if (in) {
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    auto& files = corpus::files();
    auto it = files.find(path);
    if (it == files.end()) it = files.find(path + ".mf");
    if (it != files.end()) return it->second;
    throw std::runtime_error("cannot open " + path + " (and it is not a bundled corpus name)");
}

void emit(const Report& rep, const Options& opt) {
    if (opt.format == "json")
        std::cout << rep.to_json().dump(2) << "\n";
    else if (opt.format == "latex")
        std::cout << rep.to_latex();
    else
        std::cout << rep.to_text(color_enabled());
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

HierarchySpec load(const std::string& path) {
    std::string text = slurp(path);
    try {
        return parse_hierarchy(text);
    } catch (const ParseError& e) {
        std::ostringstream os;
        os << path << ": parse error at bytes [" << e.span.begin << "," << e.span.end
           << "): " << e.what();
        throw std::pair<int, std::string>(exit_parse, os.str());
    }
}

int run_el(const std::string& file, const Options& opt) {
    Timer timer;
    HierarchySpec h = load(file);
    Report rep;
    rep.command = "el";
    rep.hierarchy = h.name;
    std::vector<Expr> eqs = euler_lagrange(h);
    size_t k = 0;
    for (const Expr& e : eqs)
        rep.add_object("equation[" + std::to_string(k++) + "]", render_text(e) + " = 0",
                       render_latex(e) + " = 0", to_json(e));
    rep.elapsed_ms = timer.ms();
    emit(rep, opt);
    return exit_ok;
}

int run_derive(const std::string& file, const Options& opt) {
    Timer timer;
    HierarchySpec h = load(file);
    DerivedObjects d = derive_all(h);
    const Signature& sig = h.sig();
    Report rep;
    rep.command = "derive";
    rep.hierarchy = h.name;
    rep.add_object("omega1", render_text(d.decomposition.omega1),
                   render_latex(d.decomposition.omega1), to_json(d.decomposition.omega1));
    for (const auto& [ij, H] : d.H.coefficients())
        rep.add_object("H[" + std::to_string(sig.label_number(ij.first)) + "," +
                           std::to_string(sig.label_number(ij.second)) + "]",
                       render_text(H), render_latex(H), to_json(H));
    for (const auto& [j, w] : d.Omega.components())
        rep.add_object("omega[" + std::to_string(sig.label_number(j)) + "]", render_text(w),
                       render_latex(w), to_json(w));
    rep.elapsed_ms = timer.ms();
    emit(rep, opt);
    return exit_ok;
}

int run_check(const std::string& file, const Options& opt, int order, int degree) {
    Timer timer;
    HierarchySpec h = load(file);
    Report rep;
    rep.command = "check";
    rep.hierarchy = h.name;
    rep.seed = opt.seed;
    rep.seeded = true;

    MultiformCheckReport mc = check_multiform(h, opt.seed);
    rep.add_check("closure: dL = 0 on shell", mc.closure_L);
    rep.add_check("theorem: dH = -2 dL on shell", mc.theorem_dH);
    rep.add_check("closure: dH = 0 on shell", mc.closure_H);
    rep.add_check("closure: dOmega = 0 on shell", mc.closure_Omega);
    {
        std::string seeds;
        for (uint64_t s : mc.gauge_seeds) seeds += (seeds.empty() ? "" : ",") + std::to_string(s);
        rep.add_check("gauge lemma: H(L+dw, omega1+delta w) = H(L, omega1)", mc.gauge_lemma,
                      "seeds " + seeds);
    }
    rep.add_check("multiform Hamilton equations equivalent to E-L equations",
                  mc.hamilton_equivalent);
    if (!mc.failure.empty()) rep.add_object("first failing identity", mc.failure);

    // flow form of the conservation theorem on every law found at the bounds
    DerivedObjects d = derive_all(h);
    AnsatzSpec spec{order, degree, AnsatzSpec::Mode::Hamiltonian};
    std::vector<Form> laws = conservation_search(h, d, spec);
    size_t k = 0;
    for (const Form& F : laws) {
        std::string tag = "conservation law[" + std::to_string(k++) + "]";
        rep.add_object(tag, render_text(F), render_latex(F), to_json(F));
        HamiltonicityCheck hc = is_hamiltonian(F, d.Omega);
        bool flow_ok = false;
        if (hc.hamiltonian) {
            Form flow = interior(hc.witness->vectorfield, vertical_delta(d.H.as_form()));
            flow_ok = d.rules.is_zero_on_shell(horizontal_d(F) - flow) &&
                      d.rules.is_zero_on_shell(flow);
        }
        rep.add_check(tag + ": dF = i_{xi_F} delta H = 0 on shell", flow_ok);
    }
    if (laws.empty())
        rep.add_object("conservation laws",
                       "none found at order " + std::to_string(order) + ", degree " +
                           std::to_string(degree));
    rep.elapsed_ms = timer.ms();
    emit(rep, opt);
    return rep.all_pass() ? exit_ok : exit_check_failed;
}

int run_conslaw(const std::string& file, const Options& opt, int order, int degree,
                const std::string& mode) {
    Timer timer;
    HierarchySpec h = load(file);
    DerivedObjects d = derive_all(h);
    AnsatzSpec spec{order, degree,
                    mode == "closed" ? AnsatzSpec::Mode::Closed : AnsatzSpec::Mode::Hamiltonian};
    std::vector<Form> laws = conservation_search(h, d, spec);
    Report rep;
    rep.command = "conslaw";
    rep.hierarchy = h.name;
    size_t k = 0;
    for (const Form& F : laws) {
        rep.add_object("F[" + std::to_string(k) + "]", render_text(F), render_latex(F), to_json(F));
        rep.add_check("F[" + std::to_string(k) + "] closed on shell",
                      d.rules.is_zero_on_shell(horizontal_d(F)));
        ++k;
    }
    if (laws.empty()) rep.add_object("result", "no conservation laws at these bounds");
    rep.elapsed_ms = timer.ms();
    emit(rep, opt);
    return exit_ok;
}

int run_bracket(const std::string& file, const Options& opt, const std::string& lhs,
                const std::string& rhs, int time_dir) {
    Timer timer;
    HierarchySpec h = load(file);
    DerivedObjects d = derive_all(h);
    Signature& sig = *h.signature;
    Report rep;
    rep.command = "bracket";
    rep.hierarchy = h.name;
    try {
        if (time_dir > 0) {
            int dir = sig.direction_by_label_number(time_dir);
            if (dir < 0) throw std::runtime_error("no such direction");
            Expr f = parse_expr(lhs, sig);
            Expr g = parse_expr(rhs, sig);
            Expr b = single_time_bracket(f, g, dir, d.Omega);
            rep.add_object("{lhs,rhs}_" + std::to_string(time_dir), render_text(b),
                           render_latex(b), to_json(b));
        } else {
            Form P = parse_form(lhs, sig);
            Form Q = parse_form(rhs, sig);
            HamiltonicityCheck hp = is_hamiltonian(P, d.Omega);
            HamiltonicityCheck hq = is_hamiltonian(Q, d.Omega);
            if (!hp.hamiltonian)
                throw NotHamiltonian("lhs is not Hamiltonian: " + hp.certificate);
            if (!hq.hamiltonian)
                throw NotHamiltonian("rhs is not Hamiltonian: " + hq.certificate);
            Form b = multitime_bracket(*hp.witness, *hq.witness);
            rep.add_object("{|lhs,rhs|}", render_text(b), render_latex(b), to_json(b));
            if (P.bidegree().second == 1 && Q.bidegree().second == 1) {
                DecompositionReport dr = decomposition_check(*hp.witness, *hq.witness, d.Omega);
                rep.add_check("decomposition {|P,Q|} = sum_i {P_i,Q_i}_i dx^i",
                              dr.bracket_decomposes);
                rep.add_check("xi_P serves as xi^i_{P_i} for each i", dr.shared_vector_field);
            }
        }
    } catch (const ParseError& e) {
        std::ostringstream os;
        os << "bracket operand: parse error at bytes [" << e.span.begin << "," << e.span.end
           << "): " << e.what();
        throw std::pair<int, std::string>(exit_parse, os.str());
    }
    rep.elapsed_ms = timer.ms();
    emit(rep, opt);
    return rep.all_pass() ? exit_ok : exit_check_failed;
}

int run_corpus(const std::string& action, const std::string& dir) {
    if (action == "list") {
        for (const auto& [name, text] : corpus::files()) std::cout << name << "\n";
        return exit_ok;
    }
    if (action == "export") {
        for (const auto& [name, text] : corpus::files()) {
            std::string path = dir.empty() ? name : dir + "/" + name;
            std::ofstream out(path, std::ios::binary);
            if (!out) {
                std::cerr << "cannot write " << path << "\n";
                return exit_usage;
            }
            out << text;
            std::cout << path << "\n";
        }
        return exit_ok;
    }
    std::cerr << "unknown corpus action: " << action << "\n";
    return exit_usage;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiform: Hamiltonian multiforms, symplectic multiforms and multi-time "
                 "Poisson brackets for Lagrangian multiform hierarchies"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json", "latex"}))
        ->capture_default_str();
    app.add_option("--seed", opt.seed, "seed for randomized checks")->capture_default_str();

    std::string file, lhs, rhs, mode = "hamiltonian", corpus_action, corpus_dir;
    int order = 3, degree = 3, time_dir = 0;

    CLI::App* el = app.add_subcommand("el", "multiform Euler-Lagrange equations");
    el->add_option("file", file, "hierarchy file (.mf) or corpus name")->required();

    CLI::App* derive = app.add_subcommand("derive", "Omega^(1), Hamiltonian multiform, Omega");
    derive->add_option("file", file)->required();

    CLI::App* check = app.add_subcommand("check", "closure relations and structural theorems");
    check->add_option("file", file)->required();
    check->add_option("--order", order, "conservation-law ansatz jet order")
        ->capture_default_str();
    check->add_option("--degree", degree, "conservation-law ansatz degree")->capture_default_str();

    CLI::App* conslaw = app.add_subcommand("conslaw", "conservation-law search");
    conslaw->add_option("file", file)->required();
    conslaw->add_option("--order", order)->capture_default_str();
    conslaw->add_option("--degree", degree)->capture_default_str();
    conslaw->add_option("--mode", mode)->check(CLI::IsMember({"hamiltonian", "closed"}))
        ->capture_default_str();

    CLI::App* bracket = app.add_subcommand("bracket", "multi-time or single-time Poisson bracket");
    bracket->add_option("file", file)->required();
    bracket->add_option("--lhs", lhs, "left operand (form or expression)")->required();
    bracket->add_option("--rhs", rhs, "right operand")->required();
    bracket->add_option("--time", time_dir, "single-time bracket in this direction");

    CLI::App* corpus_cmd = app.add_subcommand("corpus", "bundled corpus");
    corpus_cmd->add_option("action", corpus_action, "list | export")->required();
    corpus_cmd->add_option("dir", corpus_dir, "target directory for export");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (el->parsed()) return run_el(file, opt);
        if (derive->parsed()) return run_derive(file, opt);
        if (check->parsed()) return run_check(file, opt, order, degree);
        if (conslaw->parsed()) return run_conslaw(file, opt, order, degree, mode);
        if (bracket->parsed()) return run_bracket(file, opt, lhs, rhs, time_dir);
        if (corpus_cmd->parsed()) return run_corpus(corpus_action, corpus_dir);
    } catch (const std::pair<int, std::string>& coded) {
        std::cerr << coded.second << "\n";
        return coded.first;
    } catch (const ParseError& e) {
        std::cerr << "parse error at bytes [" << e.span.begin << "," << e.span.end
                  << "): " << e.what() << "\n";
        return exit_parse;
    } catch (const NonDecomposable& e) {
        std::cerr << "not decomposable: " << e.what() << "\n";
        return exit_degenerate;
    } catch (const NonOrientable& e) {
        std::cerr << "not orientable: " << e.what() << "\n";
        return exit_degenerate;
    } catch (const NotHamiltonian& e) {
        std::cerr << "not Hamiltonian: " << e.what() << "\n";
        return exit_check_failed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
