#include "stk/polynomial.hpp"

#include <algorithm>

#include "stk/errors.hpp"

namespace stk {

Monomial Monomial::variable(LabelId id) {
    Monomial m;
    m.powers_.emplace_back(id, 1);
    return m;
}

Monomial Monomial::from_factors(std::vector<LabelId> factors) {
    std::sort(factors.begin(), factors.end());
    Monomial m;
    for (std::size_t i = 0; i < factors.size();) {
        std::size_t j = i;
        while (j < factors.size() && factors[j] == factors[i]) ++j;
        m.powers_.emplace_back(factors[i], static_cast<int>(j - i));
        i = j;
    }
    return m;
}

int Monomial::degree() const {
    int d = 0;
    for (auto& [id, e] : powers_) d += e;
    return d;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial out;
    auto ia = a.powers_.begin(), ib = b.powers_.begin();
    while (ia != a.powers_.end() || ib != b.powers_.end()) {
        if (ib == b.powers_.end() || (ia != a.powers_.end() && ia->first < ib->first)) {
            out.powers_.push_back(*ia++);
        } else if (ia == a.powers_.end() || ib->first < ia->first) {
            out.powers_.push_back(*ib++);
        } else {
            out.powers_.emplace_back(ia->first, ia->second + ib->second);
            ++ia;
            ++ib;
        }
    }
    return out;
}

Poly Poly::constant(std::int64_t c) {
    if (c == 0) return Poly();
    return Poly({{Monomial(), c}});
}

Poly Poly::variable(LabelId id) { return Poly({{Monomial::variable(id), 1}}); }

Poly Poly::term(Monomial m, std::int64_t c) {
    if (c == 0) return Poly();
    return Poly({{std::move(m), c}});
}

int Poly::degree() const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<std::pair<Monomial, std::int64_t>> out;
    out.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
        if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
            out.push_back(*ia++);
        } else if (ia == a.terms_.end() || ib->first < ia->first) {
            out.push_back(*ib++);
        } else {
            std::int64_t c = ia->second + ib->second;
            if (c != 0) out.emplace_back(ia->first, c);
            ++ia;
            ++ib;
        }
    }
    return Poly(std::move(out));
}

Poly operator-(const Poly& a, const Poly& b) {
    Poly neg = b;
    for (auto& [m, c] : neg.terms_) c = -c;
    return a + neg;
}

Poly operator*(const Poly& a, const Poly& b) {
    std::map<Monomial, std::int64_t> acc;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            auto [it, fresh] = acc.emplace(ma * mb, ca * cb);
            if (!fresh) {
                it->second += ca * cb;
                if (it->second == 0) acc.erase(it);
            }
        }
    std::vector<std::pair<Monomial, std::int64_t>> out(acc.begin(), acc.end());
    return Poly(std::move(out));
}

Rat Poly::evaluate(const std::map<LabelId, Rat>& point) const {
    Rat total = 0;
    for (const auto& [m, c] : terms_) {
        Rat prod = c;
        for (auto [id, e] : m.powers()) {
            auto it = point.find(id);
            if (it == point.end())
                throw PreconditionError("no value for label id " + std::to_string(id));
            for (int k = 0; k < e; ++k) prod *= it->second;
        }
        total += prod;
    }
    return total;
}

std::string Poly::to_string(const std::function<std::string(LabelId)>& name) const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const auto& [m, c] = terms_[i];
        if (i > 0) s += c < 0 ? " - " : " + ";
        else if (c < 0) s += "-";
        std::int64_t mag = c < 0 ? -c : c;
        bool wrote = false;
        if (mag != 1 || m.powers().empty()) {
            s += std::to_string(mag);
            wrote = true;
        }
        for (auto [id, e] : m.powers()) {
            if (wrote) s += "*";
            s += name(id);
            if (e > 1) s += "^" + std::to_string(e);
            wrote = true;
        }
    }
    return s;
}

}  // namespace stk
