#include "frobstat/families.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace frobstat {

namespace {

const std::vector<u64>& small_primes() {
    static const std::vector<u64> ps = primes_up_to(1'000'000);
    return ps;
}

// largest prime factor of |n|; saturates when a cofactor above 2^64 survives
// trial division
u64 largest_prime_factor_big(bigint n, bool& saturated) {
    if (n < 0) n = -n;
    if (n <= 1) return 1;
    u64 best = 1;
    for (u64 p : small_primes()) {
        if (n == 1) break;
        if (n % p == 0) {
            best = p;
            while (n % p == 0) n /= p;
        }
        if (bigint(p) * p > n) break;
    }
    if (n == 1) return best;
    if (n <= std::numeric_limits<u64>::max()) return std::max(best, largest_prime_factor(n.convert_to<u64>()));
    saturated = true;
    return std::numeric_limits<u64>::max();
}

std::vector<i64> to_i64(const poly& p, const char* name) {
    std::vector<i64> out;
    for (const auto& k : p.c) {
        if (k > std::numeric_limits<i64>::max() || k < std::numeric_limits<i64>::min())
            throw error(errc::range, std::string("coefficient of ") + name + " does not fit in 64 bits");
        out.push_back(k.convert_to<i64>());
    }
    return out;
}

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

i64 parse_i64(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(trim(s), &pos);
        if (pos != trim(s).size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw error(errc::parse, "bad integer '" + s + "' for " + what);
    }
}

}  // namespace

curve_family::curve_family(poly f, poly g) : f_(std::move(f)), g_(std::move(g)) {
    fi_ = to_i64(f_, "f");
    gi_ = to_i64(g_, "g");
    poly f3 = pow(f_, 3);
    poly d = bigint(4) * f3 + bigint(27) * (g_ * g_);
    disc_ = bigint(-16) * d;
    if (disc_.is_zero()) throw error(errc::singular, "discriminant of the family vanishes identically");
    poly num = bigint(6912) * f3;
    poly gg = poly_gcd(num, d);
    q_ = exact_div(num, gg);
    r_ = exact_div(d, gg);
    bigint c = boost::multiprecision::gcd(content(q_), content(r_));
    if (r_.lead() < 0) c = -c;
    for (auto& k : q_.c) k /= c;
    for (auto& k : r_.c) k /= c;

    int df = std::max(f_.degree(), 0), dg = std::max(g_.degree(), 0);
    k_ = (unsigned)std::max((df + 3) / 4, (dg + 5) / 6);

    std::vector<bigint> data{6, content(disc_), r_.lead()};
    if (!q_.is_zero()) {
        data.push_back(q_.lead());
        data.push_back(resultant(q_, r_));
    }
    x0_ = 3;
    for (const auto& v : data) {
        if (v == 0) continue;
        x0_ = std::max(x0_, largest_prime_factor_big(v, x0_saturated_));
    }
}

curve_family curve_family::parse(const std::string& spec) {
    std::string fs, gs;
    bool hf = false, hg = false;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ';')) {
        part = trim(part);
        if (part.empty()) continue;
        auto eq = part.find('=');
        if (eq == std::string::npos) throw error(errc::parse, "family part '" + part + "' has no '='");
        std::string key = trim(part.substr(0, eq)), val = trim(part.substr(eq + 1));
        if (key == "f") {
            fs = val;
            hf = true;
        } else if (key == "g") {
            gs = val;
            hg = true;
        } else {
            throw error(errc::parse, "unknown family field '" + key + "'");
        }
    }
    if (!hf || !hg) throw error(errc::parse, "family needs both f and g: '" + spec + "'");
    return curve_family(parse_poly(fs), parse_poly(gs));
}

std::pair<u64, u64> curve_family::model_mod(i64 u, i64 v, u64 p) const {
    u64 uu = mod_signed(u, p), vv = mod_signed(v, p);
    auto hom = [&](const std::vector<i64>& c, unsigned total) {
        // sum c_i u^i v^{total-i}
        std::vector<u64> vp(total + 1);
        vp[0] = 1 % p;
        for (unsigned i = 1; i <= total; ++i) vp[i] = mulmod(vp[i - 1], vv, p);
        u64 s = 0, up = 1 % p;
        for (std::size_t i = 0; i < c.size(); ++i) {
            s = (s + mulmod(mulmod(mod_signed(c[i], p), up, p), vp[total - i], p)) % p;
            up = mulmod(up, uu, p);
        }
        return s;
    };
    return {hom(fi_, 4 * k_), hom(gi_, 6 * k_)};
}

rational curve_family::j_at(const rational& t) const {
    rational d = disc_.eval(t);
    if (d == 0) throw error(errc::singular, "discriminant vanishes at the argument");
    rational fv = f_.eval(t), gv = g_.eval(t);
    rational f3 = fv * fv * fv;
    return 6912 * f3 / (4 * f3 + 27 * gv * gv);
}

std::string curve_family::str() const { return "f=" + f_.str() + ";g=" + g_.str(); }

fraction fraction::make(i64 u, i64 v) {
    if (v == 0) throw error(errc::domain, "zero denominator");
    i64 g = (i64)gcd(u < 0 ? -(u64)u : (u64)u, v < 0 ? -(u64)v : (u64)v);
    if (g == 0) g = 1;
    u /= g;
    v /= g;
    if (v < 0) {
        u = -u;
        v = -v;
    }
    return {u, v};
}

void argument_set::normalize() {
    std::sort(entries_.begin(), entries_.end(),
              [](const argset_entry& a, const argset_entry& b) { return a.value < b.value; });
    std::vector<argset_entry> out;
    for (const auto& e : entries_) {
        if (e.mult == 0) continue;
        if (!out.empty() && out.back().value == e.value)
            out.back().mult += e.mult;
        else
            out.push_back(e);
    }
    entries_ = std::move(out);
    card_ = 0;
    for (const auto& e : entries_) card_ += e.mult;
}

bool argument_set::all_integers() const {
    for (const auto& e : entries_)
        if (e.value.den != 1) return false;
    return true;
}

argument_set argument_set::integers(u64 T) {
    if (T < 1) throw error(errc::domain, "integers set needs T >= 1");
    if (T > default_cap) throw error(errc::cap, "integers set exceeds the size cap");
    argument_set s;
    s.kind_ = argset_kind::integers;
    s.T_ = T;
    for (u64 t = 1; t <= T; ++t) s.entries_.push_back({{(i64)t, 1}, 1});
    s.card_ = T;
    return s;
}

argument_set argument_set::farey(u64 T, u64 cap) {
    if (T < 1) throw error(errc::domain, "farey set needs T >= 1");
    if (T > 1'000'000 || T * T > 2 * cap) throw error(errc::cap, "farey set exceeds the size cap");
    argument_set s;
    s.kind_ = argset_kind::farey;
    s.T_ = T;
    for (u64 v = 1; v <= T; ++v)
        for (u64 u = 1; u <= T; ++u)
            if (gcd(u, v) == 1) s.entries_.push_back({{(i64)u, (i64)v}, 1});
    if (s.entries_.size() > cap) throw error(errc::cap, "farey set exceeds the size cap");
    s.normalize();
    return s;
}

argument_set argument_set::range(i64 lo, i64 hi, u64 cap) {
    if (hi < lo) throw error(errc::domain, "range needs lo <= hi");
    if ((u128)(hi - lo) + 1 > cap) throw error(errc::cap, "range exceeds the size cap");
    argument_set s;
    s.kind_ = argset_kind::range;
    s.T_ = (u64)(hi - lo + 1);
    for (i64 t = lo; t <= hi; ++t) s.entries_.push_back({{t, 1}, 1});
    s.card_ = s.T_;
    return s;
}

argument_set argument_set::exponential_range(i64 base, u64 T) {
    if (base == 0) throw error(errc::domain, "geometric set needs a nonzero base");
    argument_set s;
    s.kind_ = argset_kind::exponential_range;
    s.T_ = T;
    i128 v = 1;
    for (u64 k = 0; k <= T; ++k) {
        if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
            throw error(errc::range, "geometric set element overflows 64 bits");
        s.entries_.push_back({{(i64)v, 1}, 1});
        v *= base;
    }
    s.normalize();
    return s;
}

argument_set argument_set::sumset(const argument_set& a, const argument_set& b, u64 cap) {
    if ((u128)a.entries_.size() * b.entries_.size() > cap) throw error(errc::cap, "sumset exceeds the size cap");
    argument_set s;
    s.kind_ = argset_kind::sumset;
    s.T_ = std::max(a.T_, b.T_);
    for (const auto& x : a.entries_)
        for (const auto& y : b.entries_) {
            i128 num = (i128)x.value.num * y.value.den + (i128)y.value.num * x.value.den;
            i128 den = (i128)x.value.den * y.value.den;
            i128 g = num < 0 ? -num : num;
            i128 h = den;
            while (h) {
                i128 t = g % h;
                g = h;
                h = t;
            }
            if (g > 1) {
                num /= g;
                den /= g;
            }
            if (num > std::numeric_limits<i64>::max() || num < std::numeric_limits<i64>::min() ||
                den > std::numeric_limits<i64>::max())
                throw error(errc::range, "sumset element overflows 64 bits");
            s.entries_.push_back({{(i64)num, (i64)den}, x.mult * y.mult});
        }
    s.normalize();
    return s;
}

argument_set argument_set::from_entries(std::vector<argset_entry> entries) {
    argument_set s;
    s.kind_ = argset_kind::explicit_set;
    for (auto& e : entries) e.value = fraction::make(e.value.num, e.value.den);
    s.entries_ = std::move(entries);
    s.normalize();
    s.T_ = s.card_;
    return s;
}

argument_set argument_set::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io, "cannot open argument set file " + path);
    std::vector<argset_entry> entries;
    std::string line;
    u64 lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(t);
        std::string fld;
        while (std::getline(ss, fld, ',')) fields.push_back(trim(fld));
        if (lineno == 1 && !fields.empty() && !fields[0].empty() &&
            !(std::isdigit((unsigned char)fields[0][0]) || fields[0][0] == '-'))
            continue;  // header
        if (fields.size() < 2 || fields.size() > 3)
            throw error(errc::parse, path + ":" + std::to_string(lineno) + ": expected numerator,denominator,multiplicity");
        std::string where = path + ":" + std::to_string(lineno);
        i64 u = parse_i64(fields[0], where + " numerator");
        i64 v = parse_i64(fields[1], where + " denominator");
        i64 m = fields.size() == 3 ? parse_i64(fields[2], where + " multiplicity") : 1;
        if (v == 0) throw error(errc::parse, where + ": zero denominator");
        if (m < 0) throw error(errc::parse, where + ": negative multiplicity");
        entries.push_back({{u, v}, (u64)m});
    }
    return from_entries(std::move(entries));
}

argument_set argument_set::parse(const std::string& spec) {
    std::string s = trim(spec);
    if (s.rfind("csv:", 0) == 0) return from_csv(s.substr(4));
    auto plus = s.find('+');
    if (plus != std::string::npos) {
        argument_set acc = parse(s.substr(0, plus));
        std::string rest = s.substr(plus + 1);
        return sumset(acc, parse(rest));
    }
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(trim(item));
    if (parts.empty()) throw error(errc::parse, "empty argument set spec");
    const std::string& kind = parts[0];
    auto need = [&](std::size_t n) {
        if (parts.size() != n) throw error(errc::parse, "argument set '" + s + "' has the wrong number of fields");
    };
    auto pos = [&](const std::string& v) {
        i64 x = parse_i64(v, "argument set '" + s + "'");
        if (x < 1) throw error(errc::parse, "argument set '" + s + "' needs a positive size");
        return (u64)x;
    };
    if (kind == "integers") {
        need(2);
        return integers(pos(parts[1]));
    }
    if (kind == "farey") {
        need(2);
        return farey(pos(parts[1]));
    }
    if (kind == "range") {
        need(3);
        return range(parse_i64(parts[1], "range lo"), parse_i64(parts[2], "range hi"));
    }
    if (kind == "geometric") {
        need(3);
        return exponential_range(parse_i64(parts[1], "geometric base"), pos(parts[2]));
    }
    throw error(errc::parse, "unknown argument set kind '" + kind + "'");
}

residue_profile make_residue_profile(const argument_set& s, u64 p) {
    residue_profile r;
    r.p = p;
    r.counts.assign(p, 0);
    for (const auto& e : s.entries()) {
        u64 v = mod_signed(e.value.den, p);
        if (v == 0) {
            r.dropped += e.mult;
            continue;
        }
        u64 w = mulmod(mod_signed(e.value.num, p), invmod(v, p), p);
        r.counts[w] += e.mult;
    }
    return r;
}

farey_deviation farey_R_deviation(u64 T, u64 p) {
    if (T < 2 || !is_prime(p)) throw error(errc::domain, "farey deviation needs T >= 2 and p prime");
    auto prof = make_residue_profile(argument_set::farey(T), p);
    double expect = 6.0 / (std::numbers::pi * std::numbers::pi) * (double)T * (double)T / (double)p;
    farey_deviation out;
    for (u64 c : prof.counts) out.max_deviation = std::max(out.max_deviation, std::fabs((double)c - expect));
    out.envelope = (double)T * std::log((double)T) + (double)T * (double)T / ((double)p * (double)p);
    out.ratio = out.max_deviation / out.envelope;
    return out;
}

bool is_permutation_poly(const poly& q, u64 p) {
    if (!is_prime(p)) throw error(errc::domain, "modulus is not prime");
    auto cm = q.reduce_mod(p);
    std::vector<char> seen(p, 0);
    for (u64 w = 0; w < p; ++w) {
        u64 y = eval_mod(cm, w, p);
        if (seen[y]) return false;
        seen[y] = 1;
    }
    return true;
}

bool is_near_permutation_rational(const poly& q, const poly& r, u64 p) {
    if (!is_prime(p)) throw error(errc::domain, "modulus is not prime");
    auto qm = q.reduce_mod(p), rm = r.reduce_mod(p);
    bool rzero = std::all_of(rm.begin(), rm.end(), [](u64 x) { return x == 0; });
    if (rzero) throw error(errc::precondition, "denominator vanishes identically mod p");
    std::size_t n = std::max(qm.size(), rm.size());
    qm.resize(n, 0);
    rm.resize(n, 0);
    bool proportional = true;
    for (std::size_t i = 0; i < n && proportional; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if ((mulmod(qm[i], rm[j], p) + p - mulmod(qm[j], rm[i], p)) % p != 0) {
                proportional = false;
                break;
            }
    if (proportional) throw error(errc::degenerate, "rational function is constant mod p");
    std::vector<char> seen(p, 0);
    for (u64 w = 0; w < p; ++w) {
        u64 den = eval_mod(rm, w, p);
        if (den == 0) continue;
        u64 y = mulmod(eval_mod(qm, w, p), invmod(den, p), p);
        if (seen[y]) return false;
        seen[y] = 1;
    }
    return true;
}

exponential_family::exponential_family(poly h, unsigned m, unsigned n, i64 b)
    : h_(std::move(h)), m_(m), n_(n), b_(b) {
    if (m % 2 == 0 || n % 2 == 0) throw error(errc::domain, "m and n must be odd positive integers");
    if (b == 0) throw error(errc::domain, "b must be nonzero");
    if (h_.is_zero()) throw error(errc::singular, "h vanishes identically");
    to_i64(h_, "h");
}

u64 exponential_family::prime_floor() const { return 6 * (u64)(b_ < 0 ? -b_ : b_); }

exponential_family::coeffs exponential_family::at_mod(u64 tp, u64 bt, u64 p) const {
    coeffs c;
    u64 j = mulmod(tp, bt, p);
    u64 jm = (j + p - 1728 % p) % p;
    u64 hv = h_.eval_mod(tp, p);
    if (j == 0 || jm == 0 || hv == 0) {
        c.singular = true;
        return c;
    }
    u64 h2 = mulmod(hv, hv, p), h3 = mulmod(h2, hv, p);
    u64 fa = mulmod(mulmod(powmod(j, n_, p), powmod(jm, m_, p), p), h2, p);
    c.a = (p - mulmod(3 % p, fa, p)) % p;
    u64 gb = mulmod(mulmod(powmod(j, (3 * n_ - 1) / 2, p), powmod(jm, (3 * m_ + 1) / 2, p), p), h3, p);
    c.b = mulmod(2 % p, gb, p);
    return c;
}

bool exponential_family::singular_at(i64 t) const {
    if (h_.eval(bigint(t)) == 0) return true;
    if (t == 0) return true;
    i64 ab = b_ < 0 ? -b_ : b_;
    if (ab == 1) {
        i64 sign = (b_ < 0 && (t % 2 != 0)) ? -1 : 1;
        return t * sign == 1728;
    }
    if (t < 0) return false;  // |t b^t| < 1
    bigint v = t;
    for (i64 i = 0; i < t; ++i) {
        v *= b_;
        if (abs(v) > 1728 * bigint(ab)) return false;
    }
    return v == 1728;
}

std::vector<u64> exp_residue_profile(const argument_set& s, i64 b, u64 p) {
    if (!is_prime(p)) throw error(errc::domain, "modulus is not prime");
    if ((6 * (u128)(b < 0 ? -b : b)) % p == 0) throw error(errc::bad_prime, "p divides 6b");
    if (!s.all_integers()) throw error(errc::domain, "exponential families need integer arguments");
    u64 M = p * (p - 1);
    std::vector<u64> counts(M, 0);
    for (const auto& e : s.entries()) counts[mod_signed(e.value.num, M)] += e.mult;
    return counts;
}

}  // namespace frobstat
