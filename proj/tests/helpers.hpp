// Shared fixtures for the test suites: cached corpus pipelines and parsing
// shorthands.

#ifndef MULTIFORM_TESTS_HELPERS_HPP
#define MULTIFORM_TESTS_HELPERS_HPP

#include "multiform/multiform.hpp"

namespace mft {

using namespace multiform;

struct Pipeline {
    HierarchySpec spec;
    DerivedObjects derived;

    explicit Pipeline(const char* src) : spec(parse_hierarchy(src)), derived(derive_all(spec)) {}

    Signature& sig() { return *spec.signature; }
    Expr e(const std::string& text) { return parse_expr(text, sig()); }
    Form f(const std::string& text) { return parse_form(text, sig()); }
};

inline Pipeline& pkdv123() {
    static Pipeline p(corpus::pkdv123);
    return p;
}
inline Pipeline& pkdv135() {
    static Pipeline p(corpus::pkdv135);
    return p;
}
inline Pipeline& sg123() {
    static Pipeline p(corpus::sg123);
    return p;
}
inline Pipeline& akns1234() {
    static Pipeline p(corpus::akns1234);
    return p;
}

// membership up to sign/scale
inline bool contains_equation(const std::vector<Expr>& eqs, const Expr& e) {
    for (const Expr& k : eqs) {
        if (k == e) return true;
        if (k.is_zero() || e.is_zero()) continue;
        Scalar ratio = k.leading_term().second / e.leading_term().second;
        if (k == ratio * e) return true;
    }
    return false;
}

// some scalar multiple of `of` equals `w`
inline bool proportional(const Form& w, const Form& of) {
    if (w.is_zero() || of.is_zero()) return w.is_zero() && of.is_zero();
    auto& [kw, cw] = *w.terms().begin();
    Expr cof = of.coefficient(kw);
    if (cof.is_zero()) return false;
    Scalar ratio = cw.terms().begin()->second / cof.coeff(cw.terms().begin()->first);
    return w == ratio * of;
}

// random rational combination of a basis of forms
inline Form random_combo(RandomGen& gen, const std::vector<Form>& basis, const Signature& sig) {
    Form out(sig);
    for (const Form& b : basis) {
        if (gen.uniform(0, 2) == 0) continue;
        out += gen.scalar() * b;
    }
    if (out.is_zero() && !basis.empty()) out += basis.front();
    return out;
}

} // namespace mft

#endif
