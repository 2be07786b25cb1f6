#pragma once

#include <algorithm>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "osculum/errors.hpp"
#include "osculum/multi_index.hpp"
#include "osculum/scalar.hpp"

namespace osculum {

// A value that is either known exactly or only bounded below ("at least n").
struct OrderBound {
    int value = 0;
    bool at_least = false;

    static OrderBound exactly(int n) { return {n, false}; }
    static OrderBound bounded_below(int n) { return {n, true}; }

    // Total order used for max/min reductions: ">= n" sits just above "n".
    long long key() const { return 2LL * value + (at_least ? 1 : 0); }

    bool operator==(const OrderBound& o) const {
        return value == o.value && at_least == o.at_least;
    }
    std::string str() const {
        return at_least ? ">=" + std::to_string(value) : std::to_string(value);
    }
};

// Total degree of the first non-vanishing coefficient of a jet, or the sentinel
// "at least k+1" when every stored coefficient vanishes.
using VanishingOrder = OrderBound;

// Truncated Taylor expansion of a map R^p -> R^width about a base point,
// with coefficients indexed by the shared graded-lexicographic table.
// Coefficient of multi-index beta is d^beta f(base) / beta!.
// Values are immutable after construction.
template <class S>
class Jet {
public:
    Jet(std::vector<S> base, int order, int width)
        : base_(std::move(base)), width_(width),
          tab_(MultiIndexTable::get(static_cast<int>(base_.size()), order)) {
        if (width_ < 1) throw DimensionMismatch("jet width must be >= 1");
        coeffs_.assign(width_, std::vector<S>(tab_->size(), S(0)));
    }

    static Jet constant(std::vector<S> base, int order, std::vector<S> values) {
        Jet j(std::move(base), order, static_cast<int>(values.size()));
        for (int c = 0; c < j.width_; ++c) j.coeffs_[c][0] = values[c];
        return j;
    }

    // The coordinate function u_i as a jet: base value plus unit linear term.
    static Jet variable(std::vector<S> base, int order, int var) {
        if (var < 0 || var >= static_cast<int>(base.size()))
            throw DimensionMismatch("variable index out of range");
        S value = base[var];
        Jet j(std::move(base), order, 1);
        j.coeffs_[0][0] = value;
        if (order >= 1) {
            MultiIndex mi{std::vector<int>(j.vars(), 0)};
            mi.entries[var] = 1;
            j.coeffs_[0][j.tab_->rank_of(mi)] = S(1);
        }
        return j;
    }

    static Jet from_coeffs(std::vector<S> base, int order,
                           std::vector<std::vector<S>> coeffs) {
        Jet j(std::move(base), order, static_cast<int>(coeffs.size()));
        for (int c = 0; c < j.width_; ++c) {
            if (coeffs[c].size() != j.tab_->size())
                throw DimensionMismatch("coefficient vector size does not match table");
            j.coeffs_[c] = std::move(coeffs[c]);
        }
        return j;
    }

    int vars() const { return static_cast<int>(base_.size()); }
    int order() const { return tab_->order(); }
    int width() const { return width_; }
    const std::vector<S>& base() const { return base_; }
    const MultiIndexTable& table() const { return *tab_; }

    const S& coeff_by_rank(int comp, std::size_t rank) const { return coeffs_[comp][rank]; }
    const S& coeff(int comp, const MultiIndex& mi) const {
        return coeffs_[comp][tab_->rank_of(mi)];
    }
    // Value of the map at the base point.
    const S& value(int comp = 0) const { return coeffs_[comp][0]; }

    Jet truncate(int new_order) const {
        if (new_order >= order()) return *this;
        Jet out(base_, new_order, width_);
        for (int c = 0; c < width_; ++c)
            std::copy(coeffs_[c].begin(), coeffs_[c].begin() + out.tab_->size(),
                      out.coeffs_[c].begin());
        return out;
    }

    Jet component(int c) const {
        Jet out(base_, order(), 1);
        out.coeffs_[0] = coeffs_[c];
        return out;
    }

    Jet components(int first, int count) const {
        Jet out(base_, order(), count);
        for (int c = 0; c < count; ++c) out.coeffs_[c] = coeffs_[first + c];
        return out;
    }

    // Stack the components of two jets over the same domain.
    static Jet vstack(const Jet& a, const Jet& b) {
        a.check_domain(b);
        int k = std::min(a.order(), b.order());
        Jet ta = a.truncate(k), tb = b.truncate(k);
        Jet out(ta.base_, k, ta.width_ + tb.width_);
        for (int c = 0; c < ta.width_; ++c) out.coeffs_[c] = ta.coeffs_[c];
        for (int c = 0; c < tb.width_; ++c) out.coeffs_[ta.width_ + c] = tb.coeffs_[c];
        return out;
    }

    friend Jet operator+(const Jet& a, const Jet& b) { return a.add_sub(b, false); }
    friend Jet operator-(const Jet& a, const Jet& b) { return a.add_sub(b, true); }

    Jet operator-() const {
        Jet out = *this;
        for (auto& comp : out.coeffs_)
            for (auto& v : comp) v = -v;
        return out;
    }

    Jet scaled(const S& k) const {
        Jet out = *this;
        for (auto& comp : out.coeffs_)
            for (auto& v : comp) v = v * k;
        return out;
    }

    // Product with broadcast: widths must match, or one side must be scalar.
    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check_domain(b);
        if (a.width_ != b.width_ && a.width_ != 1 && b.width_ != 1)
            throw DimensionMismatch("jet product width mismatch");
        int k = std::min(a.order(), b.order());
        Jet ta = a.truncate(k), tb = b.truncate(k);
        int w = std::max(ta.width_, tb.width_);
        Jet out(ta.base_, k, w);
        const auto& tab = *out.tab_;
        for (int c = 0; c < w; ++c) {
            const auto& ca = ta.coeffs_[ta.width_ == 1 ? 0 : c];
            const auto& cb = tb.coeffs_[tb.width_ == 1 ? 0 : c];
            auto& co = out.coeffs_[c];
            for (std::size_t ra = 0; ra < ca.size(); ++ra) {
                if (ca[ra] == S(0)) continue;
                for (std::size_t rb = 0; rb < cb.size(); ++rb) {
                    if (cb[rb] == S(0)) continue;
                    std::size_t rs = tab.rank_of_sum(ra, rb);
                    if (rs == MultiIndexTable::npos) continue;
                    co[rs] += ca[ra] * cb[rb];
                }
            }
        }
        return out;
    }

    // Reciprocal of a scalar jet with non-zero value at the base.
    Jet reciprocal() const {
        if (width_ != 1) throw DimensionMismatch("reciprocal needs a scalar jet");
        const S c0 = coeffs_[0][0];
        if (c0 == S(0)) throw DomainError("division by a jet vanishing at the base point");
        // 1/(c + w) = (1/c) * sum_j (-w/c)^j
        Jet w = *this;
        w.coeffs_[0][0] = S(0);
        Jet t = w.scaled(S(-1) / c0);
        Jet acc = constant(base_, order(), {S(1)});
        Jet pw = acc;
        for (int j = 1; j <= order(); ++j) {
            pw = pw * t;
            acc = acc + pw;
        }
        return acc.scaled(S(1) / c0);
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }

    Jet pow_int(long long e) const {
        if (width_ != 1) throw DimensionMismatch("pow needs a scalar jet");
        if (e < 0) return reciprocal().pow_int(-e);
        Jet acc = constant(base_, order(), {S(1)});
        Jet base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    // Partial derivative with respect to variable j; drops one order.
    Jet derivative(int j) const {
        if (order() < 1) throw InsufficientJetOrder("cannot differentiate an order-0 jet");
        Jet out(base_, order() - 1, width_);
        for (std::size_t r = 0; r < out.tab_->size(); ++r) {
            MultiIndex mi = out.tab_->at(r);
            ++mi.entries[j];
            std::size_t src = tab_->rank_of(mi);
            for (int c = 0; c < width_; ++c)
                out.coeffs_[c][r] = coeffs_[c][src] * S(mi.entries[j]);
        }
        return out;
    }

    // Composition a(b(.)): b maps into the domain of a, b's values at its base
    // must equal a's base point (zero constant term after the shift).
    static Jet compose(const Jet& a, const Jet& b) {
        if (b.width_ != a.vars())
            throw DimensionMismatch("inner jet width must equal outer variable count");
        int k = std::min(a.order(), b.order());
        // Shifted inner components w_i = b_i - a.base_i.
        std::vector<Jet> w;
        w.reserve(a.vars());
        for (int i = 0; i < a.vars(); ++i) {
            Jet wi = b.component(i).truncate(k);
            if (!(wi.coeffs_[0][0] == a.base_[i]))
                throw DimensionMismatch("inner jet constant term must match outer base point");
            wi.coeffs_[0][0] = S(0);
            w.push_back(std::move(wi));
        }
        // Powers cache w_i^j.
        std::vector<std::vector<Jet>> pw(a.vars());
        for (int i = 0; i < a.vars(); ++i) {
            pw[i].push_back(Jet::constant(b.base_, k, {S(1)}));
            for (int j = 1; j <= k; ++j) pw[i].push_back(pw[i][j - 1] * w[i]);
        }
        Jet out(b.base_, k, a.width_);
        for (std::size_t ra = 0; ra < a.tab_->size(); ++ra) {
            if (a.tab_->degree_of(ra) > k) break;
            bool any = false;
            for (int c = 0; c < a.width_; ++c) any = any || !(a.coeffs_[c][ra] == S(0));
            if (!any) continue;
            const MultiIndex& mi = a.tab_->at(ra);
            Jet mono = pw[0][mi.entries[0]];
            for (int i = 1; i < a.vars(); ++i)
                if (mi.entries[i] > 0) mono = mono * pw[i][mi.entries[i]];
            for (int c = 0; c < a.width_; ++c) {
                const S& coef = a.coeffs_[c][ra];
                if (coef == S(0)) continue;
                for (std::size_t r = 0; r < out.tab_->size(); ++r)
                    out.coeffs_[c][r] += coef * mono.coeffs_[0][r];
            }
        }
        return out;
    }

    // Total degree of the first non-zero coefficient over all components.
    // Float-mode coefficients with |c| <= tol count as zero.
    VanishingOrder vanishing_order(double tol = 0.0) const {
        for (int d = 0; d <= order(); ++d) {
            for (std::size_t r = tab_->degree_begin(d); r < tab_->degree_end(d); ++r)
                for (int c = 0; c < width_; ++c)
                    if (!ScalarOps<S>::is_zero(coeffs_[c][r], tol))
                        return VanishingOrder::exactly(d);
        }
        return VanishingOrder::bounded_below(order() + 1);
    }

    // Values of the degree-d homogeneous part at direction w, per component.
    std::vector<S> eval_homogeneous(int d, const std::vector<S>& w) const {
        if (static_cast<int>(w.size()) != vars())
            throw DimensionMismatch("direction dimension mismatch");
        std::vector<S> out(width_, S(0));
        for (std::size_t r = tab_->degree_begin(d); r < tab_->degree_end(d); ++r) {
            const MultiIndex& mi = tab_->at(r);
            S mono(1);
            for (int i = 0; i < vars(); ++i)
                for (int e = 0; e < mi.entries[i]; ++e) mono *= w[i];
            for (int c = 0; c < width_; ++c) out[c] += coeffs_[c][r] * mono;
        }
        return out;
    }

    // Polynomial evaluation at base + h (useful in tests and estimators).
    std::vector<S> eval_at_offset(const std::vector<S>& h) const {
        std::vector<S> out(width_, S(0));
        for (std::size_t r = 0; r < tab_->size(); ++r) {
            const MultiIndex& mi = tab_->at(r);
            S mono(1);
            for (int i = 0; i < vars(); ++i)
                for (int e = 0; e < mi.entries[i]; ++e) mono *= h[i];
            for (int c = 0; c < width_; ++c) out[c] += coeffs_[c][r] * mono;
        }
        return out;
    }

    bool operator==(const Jet& o) const {
        return base_ == o.base_ && order() == o.order() && coeffs_ == o.coeffs_;
    }

    std::string str() const {
        std::ostringstream os;
        os << "jet(p=" << vars() << ", k=" << order() << ", w=" << width_ << ")[";
        for (int c = 0; c < width_; ++c) {
            if (c) os << " | ";
            bool first = true;
            for (std::size_t r = 0; r < tab_->size(); ++r) {
                if (ScalarOps<S>::is_zero(coeffs_[c][r], 0.0)) continue;
                if (!first) os << " + ";
                first = false;
                os << ScalarOps<S>::str(coeffs_[c][r]);
                const MultiIndex& mi = tab_->at(r);
                for (int i = 0; i < vars(); ++i)
                    if (mi.entries[i] > 0) {
                        os << "*u" << (i + 1);
                        if (mi.entries[i] > 1) os << "^" << mi.entries[i];
                    }
            }
            if (first) os << "0";
        }
        os << "]";
        return os.str();
    }

private:
    void check_domain(const Jet& o) const {
        if (vars() != o.vars() || !(base_ == o.base_))
            throw DimensionMismatch("jets live over different base points");
    }

    Jet add_sub(const Jet& o, bool sub) const {
        check_domain(o);
        if (width_ != o.width_) throw DimensionMismatch("jet width mismatch");
        int k = std::min(order(), o.order());
        Jet a = truncate(k), b = o.truncate(k);
        for (int c = 0; c < width_; ++c)
            for (std::size_t r = 0; r < a.tab_->size(); ++r) {
                if (sub) a.coeffs_[c][r] -= b.coeffs_[c][r];
                else a.coeffs_[c][r] += b.coeffs_[c][r];
            }
        return a;
    }

    std::vector<S> base_;
    int width_;
    std::shared_ptr<const MultiIndexTable> tab_;
    std::vector<std::vector<S>> coeffs_;
};

template <class S>
Jet<S> jet_add(const Jet<S>& a, const Jet<S>& b) { return a + b; }
template <class S>
Jet<S> jet_sub(const Jet<S>& a, const Jet<S>& b) { return a - b; }
template <class S>
Jet<S> jet_mul(const Jet<S>& a, const Jet<S>& b) { return a * b; }
template <class S>
Jet<S> jet_compose(const Jet<S>& a, const Jet<S>& b) { return Jet<S>::compose(a, b); }

} // namespace osculum
