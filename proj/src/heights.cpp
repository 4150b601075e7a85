#include "arithdyn/heights.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace arithdyn {

ProjectivePoint ProjectivePoint::from_integers(std::vector<mpz_class> raw) {
    bool all_zero = true;
    for (const auto& c : raw)
        if (c != 0) { all_zero = false; break; }
    if (all_zero) throw AllZero("all homogeneous coordinates are zero");

    mpz_class g = 0;
    for (const auto& c : raw) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    for (auto& c : raw) c /= g;

    for (const auto& c : raw) {
        if (c == 0) continue;
        if (c < 0)
            for (auto& x : raw) x = -x;
        break;
    }
    return ProjectivePoint(std::move(raw));
}

ProjectivePoint ProjectivePoint::from_rationals(const std::vector<mpq_class>& raw) {
    mpz_class lcm = 1;
    for (const auto& q : raw)
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
    std::vector<mpz_class> ints;
    ints.reserve(raw.size());
    for (const auto& q : raw) ints.push_back(mpz_class(q.get_num() * (lcm / q.get_den())));
    return from_integers(std::move(ints));
}

std::string ProjectivePoint::str() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < coords_.size(); ++i) {
        if (i) os << " : ";
        os << coords_[i];
    }
    os << ")";
    return os.str();
}

ProjectivePoint normalize_projective(const std::vector<mpq_class>& raw) {
    return ProjectivePoint::from_rationals(raw);
}

HeightValue weil_height(const ProjectivePoint& P) {
    mpz_class best = 0;
    for (const auto& c : P.coords()) {
        mpz_class a = abs(c);
        if (a > best) best = a;
    }
    return HeightValue::of(log_abs(best));
}

// ---------------------------------------------------------------------------
// FactoredRational

void FactoredRational::validate() const {
    if (sign != 1 && sign != -1) throw ParseError("factored rational sign must be +-1");
    for (size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].first < 2) throw ParseError("factored rational prime < 2");
        if (factors[i].second == 0) throw ParseError("factored rational zero exponent");
        if (i > 0 && factors[i - 1].first >= factors[i].first)
            throw ParseError("factored rational primes not strictly increasing");
    }
}

FactoredRational FactoredRational::from_rational(const mpq_class& q) {
    if (q == 0) throw DomainMismatch("torus coordinate is zero");
    FactoredRational r;
    r.sign = q < 0 ? -1 : 1;
    std::map<mpz_class, mpz_class> exps;
    auto factor_into = [&exps](mpz_class n, int dir) {
        n = abs(n);
        mpz_class p = 2;
        while (n > 1) {
            if (mpz_probab_prime_p(n.get_mpz_t(), 25)) {
                exps[n] += dir;
                break;
            }
            while (n % p != 0) mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
            while (n % p == 0) {
                exps[p] += dir;
                n /= p;
            }
        }
    };
    factor_into(mpz_class(q.get_num()), +1);
    factor_into(mpz_class(q.get_den()), -1);
    for (auto& [p, e] : exps)
        if (e != 0) r.factors.emplace_back(p, e);
    return r;
}

FactoredRational FactoredRational::times(const FactoredRational& o) const {
    FactoredRational r;
    r.sign = sign * o.sign;
    size_t i = 0, j = 0;
    while (i < factors.size() || j < o.factors.size()) {
        if (j == o.factors.size() || (i < factors.size() && factors[i].first < o.factors[j].first)) {
            r.factors.push_back(factors[i++]);
        } else if (i == factors.size() || o.factors[j].first < factors[i].first) {
            r.factors.push_back(o.factors[j++]);
        } else {
            mpz_class e = factors[i].second + o.factors[j].second;
            if (e != 0) r.factors.emplace_back(factors[i].first, e);
            ++i;
            ++j;
        }
    }
    return r;
}

FactoredRational FactoredRational::pow(const mpz_class& k) const {
    FactoredRational r;
    if (k == 0) return r;
    r.sign = (sign == -1 && mpz_odd_p(k.get_mpz_t())) ? -1 : 1;
    for (const auto& [p, e] : factors) r.factors.emplace_back(p, e * k);
    return r;
}

mpq_class FactoredRational::to_rational() const {
    mpz_class num = sign, den = 1;
    for (const auto& [p, e] : factors) {
        mpz_class pw;
        mpz_class ae = abs(e);
        if (!ae.fits_ulong_p()) throw BudgetExhausted("factored exponent too large to expand");
        mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), ae.get_ui());
        if (e > 0)
            num *= pw;
        else
            den *= pw;
    }
    return mpq_class(num, den);
}

double FactoredRational::log_numerator() const {
    double s = 0.0;
    for (const auto& [p, e] : factors)
        if (e > 0) s += mpz_get_d(e.get_mpz_t()) * log_abs(p);
    return s;
}

double FactoredRational::log_denominator() const {
    double s = 0.0;
    for (const auto& [p, e] : factors)
        if (e < 0) s -= mpz_get_d(e.get_mpz_t()) * log_abs(p);
    return s;
}

double FactoredRational::log_height() const {
    return std::max(log_numerator(), log_denominator());
}

size_t FactoredRational::max_exponent_bits() const {
    size_t b = 0;
    for (const auto& [p, e] : factors) b = std::max(b, bit_length(e));
    return b;
}

std::string FactoredRational::str() const {
    std::ostringstream os;
    if (sign < 0) os << "-";
    if (factors.empty()) {
        os << "1";
        return os.str();
    }
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) os << "*";
        os << factors[i].first;
        if (factors[i].second != 1) os << "^" << factors[i].second;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// TorusPoint

TorusPoint::TorusPoint(std::vector<FactoredRational> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw DomainMismatch("torus point needs positive dimension");
    for (const auto& c : coords_) c.validate();
}

TorusPoint TorusPoint::from_rationals(const std::vector<mpq_class>& coords) {
    std::vector<FactoredRational> f;
    f.reserve(coords.size());
    for (const auto& q : coords) f.push_back(FactoredRational::from_rational(q));
    return TorusPoint(std::move(f));
}

std::string TorusPoint::str() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < coords_.size(); ++i) {
        if (i) os << "; ";
        os << coords_[i].str();
    }
    os << ")";
    return os.str();
}

HeightValue torus_height(const TorusPoint& P, TorusEmbedding embedding) {
    if (embedding == TorusEmbedding::ProductOfLines) {
        double h = 0.0;
        for (const auto& c : P.coords()) h += c.log_height();
        return HeightValue::of(h);
    }

    // Height of (1 : x_1 : ... : x_d). Per prime p, the cleared common
    // denominator carries exponent d_p = max_i max(-e_{i,p}, 0); coordinate i
    // then has exponent e_{i,p} + d_p and the leading 1 has exponent d_p.
    std::map<mpz_class, mpz_class> den_exp;
    for (const auto& c : P.coords())
        for (const auto& [p, e] : c.factors)
            if (e < 0) {
                mpz_class need = -e;
                auto it = den_exp.find(p);
                if (it == den_exp.end() || it->second < need) den_exp[p] = need;
            }
    double den_log = 0.0;
    for (const auto& [p, d] : den_exp) den_log += mpz_get_d(d.get_mpz_t()) * log_abs(p);

    double best = den_log; // the cleared leading "1" coordinate
    for (const auto& c : P.coords()) {
        double v = den_log;
        for (const auto& [p, e] : c.factors) v += mpz_get_d(e.get_mpz_t()) * log_abs(p);
        best = std::max(best, v);
    }
    return HeightValue::of(best);
}

std::pair<double, double> height_comparability_constants(const std::vector<TorusPoint>& samples) {
    if (samples.empty()) throw EmptySample("height_comparability_constants needs samples");
    double M = -1.0;
    for (const auto& P : samples) {
        double hp = torus_height(P, TorusEmbedding::ProjectiveSpace).value;
        double hl = torus_height(P, TorusEmbedding::ProductOfLines).value;
        if (hp <= 0.0) continue; // only constrains M' at M' <= hl, and 0 works
        double ratio = hl / hp;
        if (M < 0.0 || ratio < M) M = ratio;
    }
    if (M < 0.0) return {1.0, 0.0}; // all-zero-height sample, by convention
    return {M, 0.0};
}

} // namespace arithdyn
