#include "frobstat/poly.hpp"

#include <cctype>
#include <sstream>

namespace frobstat {

poly::poly(std::vector<bigint> coeffs) : c(std::move(coeffs)) { trim(); }

poly poly::constant(const bigint& v) { return poly({v}); }

poly poly::variable() { return poly({0, 1}); }

void poly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

bigint poly::eval(const bigint& x) const {
    bigint r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
    return r;
}

rational poly::eval(const rational& x) const {
    rational r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + rational(*it);
    return r;
}

std::vector<u64> poly::reduce_mod(u64 p) const {
    std::vector<u64> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        bigint r = c[i] % p;
        if (r < 0) r += p;
        out[i] = r.convert_to<u64>();
    }
    return out;
}

u64 eval_mod(const std::vector<u64>& cm, u64 w, u64 p) {
    u64 r = 0;
    for (auto it = cm.rbegin(); it != cm.rend(); ++it) r = (mulmod(r, w, p) + *it) % p;
    return r;
}

u64 poly::eval_mod(u64 w, u64 p) const { return frobstat::eval_mod(reduce_mod(p), w, p); }

std::string poly::str() const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const bigint& k = c[i];
        if (k == 0) continue;
        bigint a = abs(k);
        if (!first)
            os << (k < 0 ? " - " : " + ");
        else if (k < 0)
            os << "-";
        first = false;
        if (i == 0 || a != 1) os << a;
        if (i >= 1) os << (i == 0 || a != 1 ? "*Z" : "Z");
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

poly operator+(const poly& a, const poly& b) {
    std::vector<bigint> r(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return poly(std::move(r));
}

poly operator-(const poly& a) {
    poly r = a;
    for (auto& k : r.c) k = -k;
    return r;
}

poly operator-(const poly& a, const poly& b) { return a + (-b); }

poly operator*(const poly& a, const poly& b) {
    if (a.is_zero() || b.is_zero()) return poly();
    std::vector<bigint> r(a.c.size() + b.c.size() - 1);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return poly(std::move(r));
}

poly operator*(const bigint& k, const poly& a) {
    poly r = a;
    for (auto& x : r.c) x *= k;
    r.trim();
    return r;
}

poly pow(const poly& a, unsigned e) {
    poly r = poly::constant(1), b = a;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bigint content(const poly& a) {
    bigint g = 0;
    for (const auto& k : a.c) g = boost::multiprecision::gcd(g, k);
    return g;
}

poly primitive_part(const poly& a) {
    if (a.is_zero()) return a;
    bigint g = content(a);
    if (a.lead() < 0) g = -g;
    poly r = a;
    for (auto& k : r.c) k /= g;
    return r;
}

poly exact_div(const poly& a, const poly& b) {
    if (b.is_zero()) throw error(errc::domain, "division by the zero polynomial");
    poly rem = a;
    int db = b.degree();
    if (rem.degree() < db) {
        if (rem.is_zero()) return poly();
        throw error(errc::domain, "polynomial division is not exact");
    }
    std::vector<bigint> q(rem.degree() - db + 1);
    while (!rem.is_zero() && rem.degree() >= db) {
        int s = rem.degree() - db;
        if (rem.lead() % b.lead() != 0) throw error(errc::domain, "polynomial division is not exact");
        bigint k = rem.lead() / b.lead();
        q[s] = k;
        for (int i = 0; i <= db; ++i) rem.c[i + s] -= k * b.c[i];
        rem.trim();
    }
    if (!rem.is_zero()) throw error(errc::domain, "polynomial division is not exact");
    return poly(std::move(q));
}

namespace {

poly pseudo_rem(const poly& a, const poly& b) {
    poly r = a;
    int db = b.degree();
    while (!r.is_zero() && r.degree() >= db) {
        int s = r.degree() - db;
        bigint lr = r.lead();
        r = b.lead() * r;
        poly t;
        t.c.assign(s, 0);
        for (const auto& k : b.c) t.c.push_back(k * lr);
        r = r - t;
    }
    return r;
}

}  // namespace

poly poly_gcd(const poly& a, const poly& b) {
    poly x = primitive_part(a), y = primitive_part(b);
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    if (x.degree() < y.degree()) std::swap(x, y);
    while (!y.is_zero()) {
        poly r = primitive_part(pseudo_rem(x, y));
        x = std::move(y);
        y = std::move(r);
    }
    return primitive_part(x);
}

bigint resultant(const poly& a, const poly& b) {
    if (a.is_zero() || b.is_zero()) return 0;
    int m = a.degree(), n = b.degree();
    if (m == 0) return boost::multiprecision::pow(a.c[0], n);
    if (n == 0) return boost::multiprecision::pow(b.c[0], m);
    int sz = m + n;
    std::vector<std::vector<bigint>> s(sz, std::vector<bigint>(sz, 0));
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i) s[r][r + i] = a.c[m - i];
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i) s[n + r][r + i] = b.c[n - i];
    // Bareiss fraction-free elimination
    bigint prev = 1;
    int sign = 1;
    for (int k = 0; k < sz - 1; ++k) {
        if (s[k][k] == 0) {
            int piv = -1;
            for (int r = k + 1; r < sz; ++r)
                if (s[r][k] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return 0;
            std::swap(s[k], s[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < sz; ++i) {
            for (int j = k + 1; j < sz; ++j) s[i][j] = (s[i][j] * s[k][k] - s[i][k] * s[k][j]) / prev;
        }
        prev = s[k][k];
    }
    return sign * s[sz - 1][sz - 1];
}

namespace {

class poly_parser {
public:
    explicit poly_parser(const std::string& s) : s_(s) {}

    poly run() {
        poly r = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected character");
        return r;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw error(errc::parse, "polynomial '" + s_ + "': " + what + " at column " + std::to_string(i_ + 1));
    }
    void skip() {
        while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) ++i_;
    }
    bool peek(char ch) {
        skip();
        return i_ < s_.size() && s_[i_] == ch;
    }
    static bool is_var(char ch) { return ch == 'Z' || ch == 'z' || ch == 'x' || ch == 'X' || ch == 't'; }

    poly expr() {
        poly r = term();
        for (;;) {
            if (peek('+')) {
                ++i_;
                r = r + term();
            } else if (peek('-')) {
                ++i_;
                r = r - term();
            } else {
                return r;
            }
        }
    }

    poly term() {
        poly r = unary();
        for (;;) {
            skip();
            if (i_ >= s_.size()) return r;
            char ch = s_[i_];
            if (ch == '*') {
                ++i_;
                r = r * unary();
            } else if (ch == '(' || is_var(ch) || std::isdigit((unsigned char)ch)) {
                r = r * power();
            } else {
                return r;
            }
        }
    }

    poly power() {
        poly b = atom();
        if (peek('^')) {
            ++i_;
            skip();
            std::size_t st = i_;
            while (i_ < s_.size() && std::isdigit((unsigned char)s_[i_])) ++i_;
            if (st == i_) fail("expected exponent");
            unsigned long e = std::stoul(s_.substr(st, i_ - st));
            if (e > 64) fail("exponent too large");
            b = pow(b, (unsigned)e);
        }
        return b;
    }

    // a sign applies to the whole power, so -Z^2 is -(Z^2)
    poly unary() {
        if (peek('-')) {
            ++i_;
            return -unary();
        }
        if (peek('+')) {
            ++i_;
            return unary();
        }
        return power();
    }

    poly atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end");
        char ch = s_[i_];
        if (ch == '(') {
            ++i_;
            poly r = expr();
            if (!peek(')')) fail("expected ')'");
            ++i_;
            return r;
        }
        if (is_var(ch)) {
            ++i_;
            return poly::variable();
        }
        if (std::isdigit((unsigned char)ch)) {
            std::size_t st = i_;
            while (i_ < s_.size() && std::isdigit((unsigned char)s_[i_])) ++i_;
            return poly::constant(bigint(s_.substr(st, i_ - st)));
        }
        fail("unexpected character");
    }
};

}  // namespace

poly parse_poly(const std::string& text) {
    std::string t = text;
    bool list = t.find(',') != std::string::npos || t.find('[') != std::string::npos;
    if (!list) return poly_parser(t).run();
    std::string body;
    for (char ch : t)
        if (ch != '[' && ch != ']') body += ch;
    std::vector<bigint> coeffs;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t a = item.find_first_not_of(" \t"), b = item.find_last_not_of(" \t");
        if (a == std::string::npos) throw error(errc::parse, "empty coefficient in '" + text + "'");
        std::string num = item.substr(a, b - a + 1);
        std::size_t k = (num[0] == '-' || num[0] == '+') ? 1 : 0;
        if (k == num.size()) throw error(errc::parse, "bad coefficient '" + num + "' in '" + text + "'");
        for (std::size_t q = k; q < num.size(); ++q)
            if (!std::isdigit((unsigned char)num[q])) throw error(errc::parse, "bad coefficient '" + num + "' in '" + text + "'");
        if (num[0] == '+') num = num.substr(1);
        coeffs.emplace_back(num);
    }
    return poly(std::move(coeffs));
}

}  // namespace frobstat
