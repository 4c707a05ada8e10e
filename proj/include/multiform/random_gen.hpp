// Seeded random expressions and forms over a signature, shared by the
// property-test suites and the randomized parts of the checker.

#ifndef MULTIFORM_RANDOM_GEN_HPP
#define MULTIFORM_RANDOM_GEN_HPP

#include "form.hpp"

#include <random>

namespace multiform {

struct RandomGen {
    std::mt19937_64 rng;

    explicit RandomGen(uint64_t seed) : rng(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    Scalar scalar(bool allow_imaginary = false) {
        Rational re(uniform(-4, 4));
        Rational den(uniform(1, 3));
        Scalar s(re / den);
        if (allow_imaginary && uniform(0, 3) == 0) s.im = Rational(uniform(-3, 3)) / den;
        if (s.is_zero()) s = Scalar::one();
        return s;
    }

    VarId jet_var(const Signature& sig, int max_order) {
        int field = uniform(0, static_cast<int>(sig.fields().size()) - 1);
        MultiIndex idx(sig.n());
        int order = uniform(0, max_order);
        for (int k = 0; k < order; ++k) idx.bump(uniform(1, sig.n()));
        return sig.jet(field, std::move(idx));
    }

    // random expression: at most max_terms terms, degree at most max_deg,
    // jet order at most max_order; may draw declared generators
    Expr expr(const Signature& sig, int max_terms = 4, int max_deg = 3, int max_order = 3,
              bool allow_imaginary = false) {
        Expr e(&sig);
        int terms = uniform(1, max_terms);
        for (int t = 0; t < terms; ++t) {
            Monomial m;
            int deg = uniform(0, max_deg);
            for (int d = 0; d < deg; ++d) {
                VarId v;
                if (sig.generator_count() > 0 && uniform(0, 4) == 0)
                    v = sig.gen_var(uniform(0, static_cast<int>(sig.generator_count()) - 1));
                else
                    v = jet_var(sig, max_order);
                m = Expr::mono_mul(sig, m, Monomial{{v, 1}});
            }
            e.add_term(std::move(m), scalar(allow_imaginary));
        }
        return e;
    }

    // random homogeneous (p,q)-form with at most max_terms terms
    Form form(const Signature& sig, int p, int q, int max_terms = 3, int max_order = 3) {
        Form w(sig);
        int terms = uniform(1, max_terms);
        for (int t = 0; t < terms; ++t) {
            std::vector<VarId> deltas;
            for (int k = 0; k < p; ++k) deltas.push_back(jet_var(sig, max_order));
            std::vector<int> dxs;
            while (static_cast<int>(dxs.size()) < q) {
                int d = uniform(1, sig.n());
                if (std::find(dxs.begin(), dxs.end(), d) == dxs.end()) dxs.push_back(d);
            }
            w += Form::term(sig, expr(sig, 2, 2, max_order), deltas, dxs);
        }
        return w;
    }
};

} // namespace multiform

#endif
