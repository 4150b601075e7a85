#include "arithdyn/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace arithdyn {

Polynomial Polynomial::constant(size_t nvars, const mpz_class& c) {
    Polynomial p{nvars, {}};
    if (c != 0) p.terms.push_back({c, std::vector<unsigned>(nvars, 0)});
    return p;
}

Polynomial Polynomial::variable(size_t nvars, size_t idx) {
    Polynomial p{nvars, {}};
    std::vector<unsigned> e(nvars, 0);
    e[idx] = 1;
    p.terms.push_back({mpz_class(1), std::move(e)});
    return p;
}

void Polynomial::normalize() {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.exps < b.exps; });
    std::vector<Term> out;
    for (auto& t : terms) {
        if (!out.empty() && out.back().exps == t.exps)
            out.back().coef += t.coef;
        else
            out.push_back(std::move(t));
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const Term& t) { return t.coef == 0; }),
              out.end());
    terms = std::move(out);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r{nvars, terms};
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    r.normalize();
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial r{nvars, terms};
    for (const auto& t : o.terms) r.terms.push_back({-t.coef, t.exps});
    r.normalize();
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r{nvars, {}};
    for (const auto& a : terms)
        for (const auto& b : o.terms) {
            Term t;
            t.coef = a.coef * b.coef;
            t.exps.resize(nvars);
            for (size_t i = 0; i < nvars; ++i) t.exps[i] = a.exps[i] + b.exps[i];
            r.terms.push_back(std::move(t));
        }
    r.normalize();
    return r;
}

Polynomial Polynomial::pow(unsigned k) const {
    Polynomial r = constant(nvars, 1);
    Polynomial base = *this;
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

unsigned Polynomial::total_degree() const {
    unsigned d = 0;
    for (const auto& t : terms) {
        unsigned s = 0;
        for (unsigned e : t.exps) s += e;
        d = std::max(d, s);
    }
    return d;
}

bool Polynomial::is_homogeneous() const {
    if (terms.empty()) return true;
    unsigned d = 0;
    for (unsigned e : terms[0].exps) d += e;
    for (const auto& t : terms) {
        unsigned s = 0;
        for (unsigned e : t.exps) s += e;
        if (s != d) return false;
    }
    return true;
}

mpz_class Polynomial::eval(const std::vector<mpz_class>& point) const {
    if (point.size() != nvars) throw DimensionMismatch("polynomial arity mismatch");
    mpz_class acc = 0, pw, monom;
    for (const auto& t : terms) {
        monom = t.coef;
        for (size_t i = 0; i < nvars; ++i) {
            if (t.exps[i] == 0) continue;
            mpz_pow_ui(pw.get_mpz_t(), point[i].get_mpz_t(), t.exps[i]);
            monom *= pw;
        }
        acc += monom;
    }
    return acc;
}

mpq_class Polynomial::eval(const std::vector<mpq_class>& point) const {
    if (point.size() != nvars) throw DimensionMismatch("polynomial arity mismatch");
    mpq_class acc = 0;
    for (const auto& t : terms) {
        mpq_class monom(t.coef);
        for (size_t i = 0; i < nvars; ++i)
            for (unsigned k = 0; k < t.exps[i]; ++k) monom *= point[i];
        acc += monom;
    }
    return acc;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& args) const {
    if (args.size() != nvars) throw DimensionMismatch("compose arity mismatch");
    size_t out_vars = args.empty() ? 0 : args[0].nvars;
    Polynomial acc = Polynomial::zero(out_vars);
    for (const auto& t : terms) {
        Polynomial monom = Polynomial::constant(out_vars, t.coef);
        for (size_t i = 0; i < nvars; ++i)
            if (t.exps[i] > 0) monom = monom * args[i].pow(t.exps[i]);
        acc = acc + monom;
    }
    return acc;
}

std::string Polynomial::str(const std::vector<std::string>& var_names) const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const auto& t = *it;
        mpz_class c = t.coef;
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        c = abs(c);
        bool has_var = false;
        for (unsigned e : t.exps)
            if (e) has_var = true;
        if (c != 1 || !has_var) os << c;
        bool star = (c != 1 || !has_var);
        for (size_t i = 0; i < nvars; ++i) {
            if (t.exps[i] == 0) continue;
            if (star) os << "*";
            os << var_names[i];
            if (t.exps[i] > 1) os << "^" << t.exps[i];
            star = true;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser: poly := term (('+'|'-') term)*
//         term := signed_factor ('*' factor)*
//         factor := integer | var ('^' integer)?

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    const std::vector<std::string>& vars;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg + " at offset " + std::to_string(pos) + " in \"" + s + "\"");
    }

    mpz_class parse_int() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        return mpz_class(s.substr(start, pos - start), 10);
    }

    int parse_var() {
        skip_ws();
        for (size_t i = 0; i < vars.size(); ++i) {
            const auto& v = vars[i];
            if (s.compare(pos, v.size(), v) == 0) {
                pos += v.size();
                return static_cast<int>(i);
            }
        }
        return -1;
    }

    Polynomial parse_factor() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        if (std::isdigit(static_cast<unsigned char>(s[pos])))
            return Polynomial::constant(vars.size(), parse_int());
        int v = parse_var();
        if (v < 0) fail("expected variable or integer");
        Polynomial p = Polynomial::variable(vars.size(), static_cast<size_t>(v));
        if (eat('^')) {
            mpz_class e = parse_int();
            if (!e.fits_uint_p()) fail("exponent too large");
            p = p.pow(static_cast<unsigned>(e.get_ui()));
        }
        return p;
    }

    Polynomial parse_term() {
        Polynomial p = parse_factor();
        while (eat('*')) p = p * parse_factor();
        return p;
    }

    Polynomial parse_poly() {
        skip_ws();
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        Polynomial acc = parse_term();
        if (neg) acc = Polynomial::zero(vars.size()) - acc;
        for (;;) {
            skip_ws();
            if (pos >= s.size()) break;
            if (eat('+')) acc = acc + parse_term();
            else if (eat('-')) acc = acc - parse_term();
            else fail("expected '+' or '-'");
        }
        return acc;
    }
};

} // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& var_names) {
    Parser p{text, 0, var_names};
    return p.parse_poly();
}

} // namespace arithdyn
