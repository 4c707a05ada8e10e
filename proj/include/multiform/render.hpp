// Rendering of engine objects to parseable text, LaTeX in the notational
// conventions of the subject (subscripted derivative strings, dx^{ij}), and
// a schema'd JSON tree.

#ifndef MULTIFORM_RENDER_HPP
#define MULTIFORM_RENDER_HPP

#include "hierarchy.hpp"

#include <json.hpp>

#include <sstream>

namespace multiform {

enum class OutputFormat { Text, Json, Latex };

inline std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1)
        os << "/" << boost::multiprecision::denominator(r);
    return os.str();
}
inline std::string rational_latex(const Rational& r, bool with_sign) {
    Rational a = with_sign ? r : (r < 0 ? Rational(-r) : r);
    std::ostringstream os;
    if (boost::multiprecision::denominator(a) == 1)
        os << boost::multiprecision::numerator(a);
    else
        os << "\\frac{" << boost::multiprecision::numerator(a) << "}{"
           << boost::multiprecision::denominator(a) << "}";
    return os.str();
}

namespace detail {

// display order: maximal jet order, then total degree, then the canonical
// monomial order; matches how the worked examples lay out their formulas
inline std::vector<std::pair<Monomial, Scalar>> display_terms(const Expr& e) {
    const Signature& sig = e.sig();
    std::vector<std::pair<Monomial, Scalar>> terms(e.terms().begin(), e.terms().end());
    auto max_order = [&](const Monomial& m) {
        int o = 0;
        for (const auto& [v, k] : m) {
            const VarInfo& vi = sig.info(v);
            if (vi.kind == VarKind::Jet) o = std::max(o, vi.index.order());
        }
        return o;
    };
    auto deg = [](const Monomial& m) {
        int d = 0;
        for (const auto& [v, k] : m) d += k;
        return d;
    };
    std::stable_sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
        int oa = max_order(a.first), ob = max_order(b.first);
        if (oa != ob) return oa < ob;
        int da = deg(a.first), db = deg(b.first);
        if (da != db) return da < db;
        return Expr::MonoLess{&sig}(a.first, b.first);
    });
    return terms;
}

inline std::string jet_subscript(const Signature& sig, const MultiIndex& idx) {
    std::string s;
    bool wide = false;
    for (int j = 1; j <= idx.n(); ++j)
        if (idx.at(j) > 0 && sig.label_number(j) > 9) wide = true;
    bool first = true;
    for (int j = 1; j <= idx.n(); ++j)
        for (int k = 0; k < idx.at(j); ++k) {
            if (!first && wide) s += ",";
            s += std::to_string(sig.label_number(j));
            first = false;
        }
    return s;
}

inline std::string var_latex(const Signature& sig, VarId v) {
    const VarInfo& vi = sig.info(v);
    if (vi.kind == VarKind::Gen) return sig.generator(vi.gen).latex;
    std::string s = sig.fields()[static_cast<size_t>(vi.field)];
    if (!vi.index.is_zero()) s += "_{" + jet_subscript(sig, vi.index) + "}";
    return s;
}

// scalar rendered without a leading sign; sign returned separately
inline std::pair<int, std::string> scalar_text(const Scalar& c, bool bare_one_ok) {
    int sign = 1;
    Scalar a = c;
    if (a.im == 0) {
        if (a.re < 0) {
            sign = -1;
            a.re = -a.re;
        }
        if (a.re == 1 && bare_one_ok) return {sign, ""};
        return {sign, rational_str(a.re)};
    }
    if (a.re == 0) {
        if (a.im < 0) {
            sign = -1;
            a.im = -a.im;
        }
        if (a.im == 1) return {sign, "i"};
        return {sign, rational_str(a.im) + "*i"};
    }
    // mixed: parenthesized, sign kept inside
    std::string s = "(" + rational_str(a.re);
    if (a.im > 0) s += "+";
    if (a.im == 1)
        s += "i";
    else if (a.im == -1)
        s += "-i";
    else
        s += rational_str(a.im) + "*i";
    s += ")";
    return {1, s};
}

inline std::pair<int, std::string> scalar_latex(const Scalar& c, bool bare_one_ok) {
    int sign = 1;
    Scalar a = c;
    if (a.im == 0) {
        if (a.re < 0) {
            sign = -1;
            a.re = -a.re;
        }
        if (a.re == 1 && bare_one_ok) return {sign, ""};
        return {sign, rational_latex(a.re, true)};
    }
    if (a.re == 0) {
        if (a.im < 0) {
            sign = -1;
            a.im = -a.im;
        }
        if (a.im == 1) return {sign, "i"};
        return {sign, rational_latex(a.im, true) + "i"};
    }
    std::string s = "\\left(" + rational_latex(a.re, true);
    if (a.im > 0) s += "+";
    if (a.im == 1)
        s += "i";
    else if (a.im == -1)
        s += "-i";
    else
        s += rational_latex(a.im, true) + "i";
    s += "\\right)";
    return {1, s};
}

} // namespace detail

inline std::string render_text(const Expr& e) {
    if (e.is_zero()) return "0";
    const Signature& sig = e.sig();
    std::string out;
    bool first = true;
    for (const auto& [m, c] : detail::display_terms(e)) {
        auto [sign, cs] = detail::scalar_text(c, !m.empty());
        if (sign < 0)
            out += first ? "-" : " - ";
        else if (!first)
            out += " + ";
        std::string body = cs;
        for (const auto& [v, k] : m) {
            if (!body.empty()) body += "*";
            body += sig.var_name(v);
            if (k > 1) body += "^" + std::to_string(k);
        }
        out += body.empty() ? "1" : body;
        first = false;
    }
    return out;
}

inline std::string render_latex(const Expr& e) {
    if (e.is_zero()) return "0";
    const Signature& sig = e.sig();
    std::string out;
    bool first = true;
    for (const auto& [m, c] : detail::display_terms(e)) {
        auto [sign, cs] = detail::scalar_latex(c, !m.empty());
        if (sign < 0)
            out += "-";
        else if (!first)
            out += "+";
        std::string body = cs;
        for (const auto& [v, k] : m) {
            body += detail::var_latex(sig, v);
            if (k > 1) body += "^{" + std::to_string(k) + "}";
        }
        out += body.empty() ? "1" : body;
        first = false;
    }
    return out;
}

namespace detail {
inline std::string form_key_text(const Signature& sig, const FormKey& k) {
    std::string s;
    for (VarId v : k.delta) {
        if (!s.empty()) s += " ^ ";
        s += "del " + sig.var_name(v);
    }
    for (int d : k.dx) {
        if (!s.empty()) s += " ^ ";
        s += "d " + sig.direction_labels()[static_cast<size_t>(d - 1)];
    }
    return s;
}
inline std::string form_key_latex(const Signature& sig, const FormKey& k) {
    std::string s;
    for (VarId v : k.delta) {
        if (!s.empty()) s += "\\wedge ";
        s += "\\delta " + var_latex(sig, v);
    }
    if (!k.dx.empty()) {
        if (!s.empty()) s += "\\wedge ";
        s += "dx^{";
        bool wide = false;
        for (int d : k.dx)
            if (sig.label_number(d) > 9) wide = true;
        bool first = true;
        for (int d : k.dx) {
            if (!first && wide) s += ",";
            s += std::to_string(sig.label_number(d));
            first = false;
        }
        s += "}";
    }
    return s;
}
} // namespace detail

inline std::string render_text(const Form& w) {
    if (w.is_zero()) return "0";
    const Signature& sig = w.sig();
    std::string out;
    bool first = true;
    for (const auto& [k, c] : w.terms()) {
        std::string key = detail::form_key_text(sig, k);
        std::string coeff;
        bool negated = false;
        if (c.size() == 1) {
            // single-term coefficient joins the wedge inline
            Expr cc = c;
            auto [m, s] = *c.terms().begin();
            auto [sign, cs] = detail::scalar_text(s, !m.empty() || !key.empty());
            negated = sign < 0;
            coeff = cs;
            for (const auto& [v, e] : m) {
                if (!coeff.empty()) coeff += "*";
                coeff += sig.var_name(v);
                if (e > 1) coeff += "^" + std::to_string(e);
            }
        } else {
            coeff = "(" + render_text(c) + ")";
        }
        if (negated)
            out += first ? "-" : " - ";
        else if (!first)
            out += " + ";
        if (!coeff.empty() && !key.empty())
            out += coeff + " * " + key;
        else if (!coeff.empty())
            out += coeff;
        else
            out += key.empty() ? "1" : key;
        first = false;
    }
    return out;
}

inline std::string render_latex(const Form& w) {
    if (w.is_zero()) return "0";
    const Signature& sig = w.sig();
    std::string out;
    bool first = true;
    for (const auto& [k, c] : w.terms()) {
        std::string key = detail::form_key_latex(sig, k);
        std::string coeff;
        bool negated = false;
        if (c.size() == 1) {
            auto [m, s] = *c.terms().begin();
            auto [sign, cs] = detail::scalar_latex(s, !m.empty() || !key.empty());
            negated = sign < 0;
            coeff = cs;
            for (const auto& [v, e] : m) {
                coeff += detail::var_latex(sig, v);
                if (e > 1) coeff += "^{" + std::to_string(e) + "}";
            }
        } else {
            coeff = "\\left(" + render_latex(c) + "\\right)";
        }
        if (negated)
            out += "-";
        else if (!first)
            out += "+";
        out += coeff;
        if (!coeff.empty() && !key.empty()) out += "\\,";
        out += key;
        first = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

using json = nlohmann::json;

inline json rational_json(const Rational& r) {
    auto num = boost::multiprecision::numerator(r);
    auto den = boost::multiprecision::denominator(r);
    auto fits = [](const Int& v) {
        static const Int lo = -(Int(1) << 53), hi = Int(1) << 53;
        return v > lo && v < hi;
    };
    json arr = json::array();
    if (fits(num))
        arr.push_back(static_cast<int64_t>(num));
    else
        arr.push_back(num.str());
    if (fits(den))
        arr.push_back(static_cast<int64_t>(den));
    else
        arr.push_back(den.str());
    return arr;
}

inline json scalar_json(const Scalar& s) {
    return json{{"re", rational_json(s.re)}, {"im", rational_json(s.im)}};
}

inline json var_json(const Signature& sig, VarId v) {
    const VarInfo& vi = sig.info(v);
    if (vi.kind == VarKind::Gen) return json{{"gen", sig.generator(vi.gen).name}};
    json idx = json::array();
    for (int j = 1; j <= vi.index.n(); ++j)
        for (int k = 0; k < vi.index.at(j); ++k) idx.push_back(sig.label_number(j));
    return json{{"field", sig.fields()[static_cast<size_t>(vi.field)]}, {"index", idx}};
}

inline json monomial_json(const Signature& sig, const Monomial& m) {
    json arr = json::array();
    for (const auto& [v, e] : m) {
        json entry = var_json(sig, v);
        entry["pow"] = e;
        arr.push_back(entry);
    }
    return arr;
}

inline json to_json(const Expr& e) {
    json terms = json::array();
    for (const auto& [m, c] : detail::display_terms(e))
        terms.push_back(json{{"coeff", scalar_json(c)}, {"monomial", monomial_json(e.sig(), m)}});
    return json{{"kind", "expr"}, {"terms", terms}};
}

inline json to_json(const Form& w) {
    const Signature& sig = w.sig();
    json terms = json::array();
    for (const auto& [k, c] : w.terms())
        for (const auto& [m, s] : c.terms()) {
            json delta = json::array();
            for (VarId v : k.delta) delta.push_back(var_json(sig, v));
            json dx = json::array();
            for (int d : k.dx) dx.push_back(sig.label_number(d));
            terms.push_back(json{{"coeff", scalar_json(s)},
                                 {"monomial", monomial_json(sig, m)},
                                 {"delta", delta},
                                 {"dx", dx}});
        }
    return json{{"kind", "form"}, {"terms", terms}};
}

inline json to_json(const LagrangianMultiform& L) {
    json comps = json::array();
    for (const auto& [ij, e] : L.coefficients())
        comps.push_back(json{{"i", L.sig().label_number(ij.first)},
                             {"j", L.sig().label_number(ij.second)},
                             {"value", to_json(e)}});
    return json{{"kind", "multiform"}, {"components", comps}};
}

inline json to_json(const HamiltonianMultiform& H) {
    json comps = json::array();
    for (const auto& [ij, e] : H.coefficients())
        comps.push_back(json{{"i", H.sig().label_number(ij.first)},
                             {"j", H.sig().label_number(ij.second)},
                             {"value", to_json(e)}});
    return json{{"kind", "multiform"}, {"components", comps}};
}

inline std::string render(const Expr& e, OutputFormat f) {
    switch (f) {
        case OutputFormat::Text: return render_text(e);
        case OutputFormat::Latex: return render_latex(e);
        case OutputFormat::Json: return to_json(e).dump();
    }
    return {};
}
inline std::string render(const Form& w, OutputFormat f) {
    switch (f) {
        case OutputFormat::Text: return render_text(w);
        case OutputFormat::Latex: return render_latex(w);
        case OutputFormat::Json: return to_json(w).dump();
    }
    return {};
}

} // namespace multiform

#endif
