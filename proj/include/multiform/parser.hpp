// Parser for the hierarchy DSL (.mf files) and for ad-hoc expressions and
// forms.  Every diagnostic carries a byte-offset source span; arbitrary input
// bytes produce a diagnostic, never a crash.
//
// Grammar sketch:
//   hierarchy NAME ;
//   directions x1 x2 x3 ;
//   field v [, w ...] ;
//   generator NAME diff(FIELD) = EXPR [diff(FIELD) = EXPR ...] ;
//   relation EXPR = EXPR ;
//   L[i,j] = EXPR ;
//   omega1[j] = FORM ;          (optional: pins the gauge of Omega^(1))
// Jet variables are written v[1,1,2] (direction-label list, order
// insensitive); literals are rationals p/q and the imaginary unit i;
// operators + - * / ^ with standard precedence; forms use `d x1`, `del v[..]`
// and `^` for the wedge.  cos(u) and sin(u) expand to a generator pair with
// the circle relation.

#ifndef MULTIFORM_PARSER_HPP
#define MULTIFORM_PARSER_HPP

#include "hierarchy.hpp"

#include <cctype>
#include <variant>

namespace multiform {

struct SourceSpan {
    size_t begin = 0;
    size_t end = 0;
};

struct ParseError : std::runtime_error {
    SourceSpan span;
    ParseError(std::string msg, SourceSpan s) : std::runtime_error(std::move(msg)), span(s) {}
};

namespace parse_detail {

enum class Tok { Ident, Int, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

inline std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    size_t i = 0;
    const size_t n = src.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (src[i] == '#') {  // comment to end of line
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        size_t begin = i;
        if (std::isalpha(c) || src[i] == '_') {
            while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
            out.push_back(Token{Tok::Ident, src.substr(begin, i - begin), {begin, i}});
            continue;
        }
        if (std::isdigit(c)) {
            while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            out.push_back(Token{Tok::Int, src.substr(begin, i - begin), {begin, i}});
            continue;
        }
        static const std::string punct = "+-*/^()[],;=";
        if (punct.find(src[i]) != std::string::npos) {
            ++i;
            out.push_back(Token{Tok::Punct, src.substr(begin, 1), {begin, i}});
            continue;
        }
        throw ParseError("unexpected character", {begin, begin + 1});
    }
    out.push_back(Token{Tok::End, "", {n, n}});
    return out;
}

// a parsed value: scalar expression or form
using Value = std::variant<Expr, Form>;

inline Form to_form(const Signature& sig, Value v) {
    if (std::holds_alternative<Form>(v)) return std::get<Form>(std::move(v));
    return Form::scalar(std::get<Expr>(std::move(v)));
}

class Parser {
  public:
    Parser(const std::string& src, Signature* sig) : src_(src), toks_(tokenize(src)), sig_(sig) {}

    const Token& peek(size_t ahead = 0) const {
        size_t k = pos_ + ahead;
        return k < toks_.size() ? toks_[k] : toks_.back();
    }
    const Token& next() {
        const Token& t = peek();
        if (t.kind != Tok::End) ++pos_;
        return t;
    }
    bool accept_punct(const char* p) {
        if (peek().kind == Tok::Punct && peek().text == p) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect_punct(const char* p, const char* what) {
        if (!accept_punct(p)) throw ParseError(std::string("expected '") + p + "' " + what, peek().span);
    }
    bool accept_ident(const char* w) {
        if (peek().kind == Tok::Ident && peek().text == w) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::string expect_ident(const char* what) {
        if (peek().kind != Tok::Ident) throw ParseError(std::string("expected ") + what, peek().span);
        return next().text;
    }
    Int expect_int(const char* what) {
        if (peek().kind != Tok::Int) throw ParseError(std::string("expected ") + what, peek().span);
        return Int(next().text);
    }
    bool at_end() const { return peek().kind == Tok::End; }

    // ----- value grammar ---------------------------------------------------

    Value parse_value() {
        guard_depth();
        Value lhs = parse_term();
        for (;;) {
            if (accept_punct("+")) {
                Value rhs = parse_term();
                lhs = combine_add(std::move(lhs), std::move(rhs), false);
            } else if (accept_punct("-")) {
                Value rhs = parse_term();
                lhs = combine_add(std::move(lhs), std::move(rhs), true);
            } else {
                --depth_;
                return lhs;
            }
        }
    }

    Expr parse_scalar_value(const char* what) {
        SourceSpan from = peek().span;
        Value v = parse_value();
        if (!std::holds_alternative<Expr>(v))
            throw ParseError(std::string(what) + " must be a scalar expression",
                             {from.begin, peek().span.begin});
        return std::get<Expr>(std::move(v));
    }

  private:
    void guard_depth() {
        if (++depth_ > 200) throw ParseError("expression nests too deeply", peek().span);
    }

    Value parse_term() {
        Value lhs = parse_factor();
        for (;;) {
            if (accept_punct("*")) {
                Value rhs = parse_factor();
                lhs = combine_mul(std::move(lhs), std::move(rhs));
            } else if (accept_punct("/")) {
                SourceSpan sp = peek().span;
                Value rhs = parse_factor();
                if (!std::holds_alternative<Expr>(rhs) || !std::get<Expr>(rhs).is_constant())
                    throw ParseError("division is only defined by nonzero constants", sp);
                Scalar d = std::get<Expr>(rhs).constant_part();
                if (d.is_zero()) throw ParseError("division by zero", sp);
                lhs = scale(std::move(lhs), Scalar::one() / d);
            } else {
                return lhs;
            }
        }
    }

    Value parse_factor() {
        Value lhs = parse_unary();
        for (;;) {
            if (!accept_punct("^")) return lhs;
            // integer exponent on a scalar is a power; anything else wedges
            if (std::holds_alternative<Expr>(lhs) && peek().kind == Tok::Int) {
                SourceSpan esp = peek().span;
                Int e(next().text);
                if (e > 64) throw ParseError("exponent too large", esp);
                lhs = std::get<Expr>(lhs).pow(static_cast<int>(e));
            } else {
                Value rhs = parse_unary();
                lhs = wedge(to_form(*sig_, std::move(lhs)), to_form(*sig_, std::move(rhs)));
            }
        }
    }

    Value parse_unary() {
        if (accept_punct("-")) return scale(parse_unary(), Scalar(-1L));
        if (accept_punct("+")) return parse_unary();
        return parse_atom();
    }

    Value parse_atom() {
        guard_depth();
        const Token& t = peek();
        Value out = Expr::zero(*sig_);
        if (t.kind == Tok::Int) {
            next();
            out = Expr::constant(*sig_, Scalar(Rational(Int(t.text))));
        } else if (t.kind == Tok::Punct && t.text == "(") {
            next();
            out = parse_value();
            expect_punct(")", "to close the parenthesis");
        } else if (t.kind == Tok::Ident) {
            out = parse_ident_atom();
        } else {
            throw ParseError("expected an expression", t.span);
        }
        --depth_;
        return out;
    }

    Value parse_ident_atom() {
        const Token& t = next();
        const std::string& name = t.text;
        if (name == "i") return Expr::constant(*sig_, Scalar::iunit());
        if (name == "d") {
            std::string lbl = expect_ident("a direction label after 'd'");
            int dir = direction_of(lbl, t.span);
            return Form::dx(*sig_, dir);
        }
        if (name == "del") {
            VarId v = parse_jetvar(expect_ident("a jet variable after 'del'"));
            return Form::delta_var(*sig_, v);
        }
        if ((name == "cos" || name == "sin") && peek().kind == Tok::Punct && peek().text == "(") {
            next();
            std::string field = expect_ident("a field name inside the trig shorthand");
            expect_punct(")", "after the trig argument");
            if (sig_->field_id(field) < 0)
                throw ParseError("unknown field " + field, t.span);
            int g = declare_trig(field, name == "cos");
            return Expr::var(*sig_, sig_->gen_var(g));
        }
        int g = sig_->generator_id(name);
        if (g >= 0) return Expr::var(*sig_, sig_->gen_var(g));
        VarId v = parse_jetvar(name, t.span);
        return Expr::var(*sig_, v);
    }

    VarId parse_jetvar(const std::string& field) { return parse_jetvar(field, peek().span); }
    VarId parse_jetvar(const std::string& field, SourceSpan sp) {
        int f = sig_->field_id(field);
        if (f < 0) throw ParseError("unknown identifier " + field, sp);
        MultiIndex idx(sig_->n());
        if (accept_punct("[")) {
            for (;;) {
                SourceSpan dsp = peek().span;
                Int num = expect_int("a direction number");
                if (num < 0 || num > 100000) throw ParseError("direction number out of range", dsp);
                int dir = sig_->direction_by_label_number(static_cast<int>(num));
                if (dir < 0) throw ParseError("no direction labelled " + num.str(), dsp);
                idx.bump(dir);
                if (!accept_punct(",")) break;
            }
            expect_punct("]", "to close the jet index");
        }
        return sig_->jet(f, std::move(idx));
    }

    int direction_of(const std::string& label, SourceSpan sp) {
        const auto& labels = sig_->direction_labels();
        for (size_t j = 0; j < labels.size(); ++j)
            if (labels[j] == label) return static_cast<int>(j) + 1;
        throw ParseError("unknown direction label " + label, sp);
    }

    int declare_trig(const std::string& field, bool want_cos) {
        std::string cn = "cos_" + field, sn = "sin_" + field;
        int existing = sig_->generator_id(cn);
        if (existing < 0) {
            int gc = sig_->add_generator(cn, "\\cos " + field);
            int gs = sig_->add_generator(sn, "\\sin " + field);
            VarId u = sig_->jet(field, {});
            sig_->set_generator_partial(gc, u, -Expr::var(*sig_, sig_->gen_var(gs)));
            sig_->set_generator_partial(gs, u, Expr::var(*sig_, sig_->gen_var(gc)));
            // sin^2 -> 1 - cos^2
            Expr rhs = Expr::constant(*sig_, Scalar::one()) -
                       Expr::var(*sig_, sig_->gen_var(gc)) * Expr::var(*sig_, sig_->gen_var(gc));
            sig_->add_relation(Monomial{{sig_->gen_var(gs), 2}}, std::move(rhs));
        }
        return sig_->generator_id(want_cos ? cn : sn);
    }

    static Value combine_add(Value a, Value b, bool subtract) {
        if (std::holds_alternative<Expr>(a) && std::holds_alternative<Expr>(b)) {
            Expr r = std::get<Expr>(std::move(a));
            if (subtract)
                r -= std::get<Expr>(b);
            else
                r += std::get<Expr>(b);
            return r;
        }
        const Signature& sig = std::holds_alternative<Expr>(a) ? std::get<Expr>(a).sig()
                                                               : std::get<Form>(a).sig();
        Form fa = to_form(sig, std::move(a));
        Form fb = to_form(sig, std::move(b));
        return subtract ? fa - fb : fa + fb;
    }

    static Value combine_mul(Value a, Value b) {
        if (std::holds_alternative<Expr>(a) && std::holds_alternative<Expr>(b))
            return std::get<Expr>(a) * std::get<Expr>(b);
        if (std::holds_alternative<Expr>(a)) return std::get<Expr>(a) * std::get<Form>(b);
        if (std::holds_alternative<Expr>(b)) return std::get<Expr>(b) * std::get<Form>(a);
        return wedge(std::get<Form>(a), std::get<Form>(b));
    }

    static Value scale(Value v, const Scalar& c) {
        if (std::holds_alternative<Expr>(v)) return c * std::get<Expr>(v);
        return c * std::get<Form>(v);
    }

    const std::string& src_;
    std::vector<Token> toks_;
    Signature* sig_;
    size_t pos_ = 0;
    int depth_ = 0;

    friend HierarchySpec parse_hierarchy_impl(const std::string&);
};

inline bool reserved_word(const std::string& s) {
    static const std::set<std::string> words{"hierarchy", "directions", "field", "fields",
                                             "generator", "relation",   "diff",  "L",
                                             "omega1",    "d",          "del",   "i",
                                             "cos",       "sin"};
    return words.count(s) > 0;
}

inline HierarchySpec parse_hierarchy_impl(const std::string& src) {
    // bootstrap: tokenize once up front to surface lexical errors, then scan
    // the header to build the signature before value parsing starts
    std::vector<Token> toks = tokenize(src);
    size_t p = 0;
    auto peek = [&]() -> const Token& { return toks[std::min(p, toks.size() - 1)]; };
    auto next = [&]() -> const Token& {
        const Token& t = peek();
        if (t.kind != Tok::End) ++p;
        return t;
    };
    auto expect_punct = [&](const char* c, const char* what) {
        if (peek().kind != Tok::Punct || peek().text != c)
            throw ParseError(std::string("expected '") + c + "' " + what, peek().span);
        ++p;
    };
    auto expect_kw = [&](const char* w) {
        if (peek().kind != Tok::Ident || peek().text != w)
            throw ParseError(std::string("expected '") + w + "'", peek().span);
        ++p;
    };

    HierarchySpec spec;
    expect_kw("hierarchy");
    if (peek().kind != Tok::Ident) throw ParseError("expected a hierarchy name", peek().span);
    spec.name = next().text;
    expect_punct(";", "after the hierarchy name");

    expect_kw("directions");
    std::vector<std::string> dirs;
    while (peek().kind == Tok::Ident) dirs.push_back(next().text);
    if (dirs.size() < 2) throw ParseError("need at least two directions", peek().span);
    expect_punct(";", "after the direction list");

    if (peek().kind != Tok::Ident || (peek().text != "field" && peek().text != "fields"))
        throw ParseError("expected 'field'", peek().span);
    ++p;
    std::vector<std::string> fields;
    for (;;) {
        if (peek().kind != Tok::Ident) throw ParseError("expected a field name", peek().span);
        const Token& ft = next();
        if (reserved_word(ft.text)) throw ParseError("field name is reserved: " + ft.text, ft.span);
        fields.push_back(ft.text);
        if (peek().kind == Tok::Punct && peek().text == ",")
            ++p;
        else
            break;
    }
    expect_punct(";", "after the field list");

    spec.signature = std::make_shared<Signature>(dirs, fields);
    Signature& sig = *spec.signature;
    spec.lagrangian = std::make_shared<LagrangianMultiform>(sig);

    // the remaining statements share one value parser positioned at p
    Parser vp(src, &sig);
    vp.pos_ = p;
    vp.toks_ = std::move(toks);

    std::set<std::pair<int, int>> seen_L;
    while (!vp.at_end()) {
        const Token& t = vp.peek();
        if (t.kind != Tok::Ident) throw ParseError("expected a statement", t.span);
        if (vp.accept_ident("generator")) {
            const Token& nt = vp.peek();
            std::string name = vp.expect_ident("a generator name");
            if (reserved_word(name) || sig.field_id(name) >= 0)
                throw ParseError("generator name collides with " + name, nt.span);
            int g = sig.add_generator(name);
            while (vp.accept_ident("diff")) {
                vp.expect_punct("(", "after diff");
                std::string fname = vp.expect_ident("a field name");
                VarId wrt = vp.parse_jetvar(fname);
                vp.expect_punct(")", "after the diff argument");
                vp.expect_punct("=", "in the generator partial");
                Expr value = vp.parse_scalar_value("a generator partial");
                sig.set_generator_partial(g, wrt, std::move(value));
            }
            vp.expect_punct(";", "after the generator declaration");
        } else if (vp.accept_ident("relation")) {
            SourceSpan sp = vp.peek().span;
            Expr lhs = vp.parse_scalar_value("a relation side");
            vp.expect_punct("=", "in the relation");
            Expr rhs = vp.parse_scalar_value("a relation side");
            vp.expect_punct(";", "after the relation");
            if (lhs.size() != 1 || !lhs.terms().begin()->second.is_one())
                throw ParseError("relation left side must be a single monic generator monomial", sp);
            const Monomial& m = lhs.terms().begin()->first;
            for (const auto& [v, e] : m)
                if (sig.info(v).kind != VarKind::Gen)
                    throw ParseError("relation left side must involve only generators", sp);
            sig.add_relation(m, std::move(rhs));
        } else if (vp.accept_ident("L")) {
            vp.expect_punct("[", "after L");
            SourceSpan isp = vp.peek().span;
            Int i = vp.expect_int("a direction number");
            vp.expect_punct(",", "between the component indices");
            Int j = vp.expect_int("a direction number");
            vp.expect_punct("]", "after the component indices");
            vp.expect_punct("=", "in the Lagrangian coefficient");
            if (i < 0 || i > 100000 || j < 0 || j > 100000)
                throw ParseError("component index out of range", isp);
            int di = sig.direction_by_label_number(static_cast<int>(i));
            int dj = sig.direction_by_label_number(static_cast<int>(j));
            if (di < 0 || dj < 0 || di == dj)
                throw ParseError("bad component indices", isp);
            if (di > dj) throw ParseError("declare L[i,j] with i before j in the direction order", isp);
            if (!seen_L.emplace(di, dj).second)
                throw ParseError("duplicate Lagrangian coefficient", isp);
            Expr value = vp.parse_scalar_value("a Lagrangian coefficient");
            vp.expect_punct(";", "after the Lagrangian coefficient");
            spec.lagrangian->set(di, dj, std::move(value));
        } else if (vp.accept_ident("omega1")) {
            vp.expect_punct("[", "after omega1");
            SourceSpan isp = vp.peek().span;
            Int j = vp.expect_int("a direction number");
            vp.expect_punct("]", "after the direction");
            vp.expect_punct("=", "in the omega1 component");
            if (j < 0 || j > 100000) throw ParseError("direction out of range", isp);
            int dj = sig.direction_by_label_number(static_cast<int>(j));
            if (dj < 0) throw ParseError("bad direction", isp);
            Value v = vp.parse_value();
            vp.expect_punct(";", "after the omega1 component");
            Form th = to_form(sig, std::move(v));
            if (!th.is_zero() && th.bidegree() != std::make_pair(1, 0))
                throw ParseError("omega1 components must be (1,0)-forms", isp);
            spec.declared_omega1[dj] = std::move(th);
        } else {
            throw ParseError("unknown statement " + t.text, t.span);
        }
    }
    return spec;
}

} // namespace parse_detail

using parse_detail::Parser;

inline HierarchySpec parse_hierarchy(const std::string& src) {
    return parse_detail::parse_hierarchy_impl(src);
}

inline Expr parse_expr(const std::string& src, Signature& sig) {
    parse_detail::Parser p(src, &sig);
    Expr e = p.parse_scalar_value("input");
    if (!p.at_end()) throw ParseError("trailing input", p.peek().span);
    return e;
}

inline Form parse_form(const std::string& src, Signature& sig) {
    parse_detail::Parser p(src, &sig);
    parse_detail::Value v = p.parse_value();
    if (!p.at_end()) throw ParseError("trailing input", p.peek().span);
    return parse_detail::to_form(sig, std::move(v));
}

} // namespace multiform

#endif
