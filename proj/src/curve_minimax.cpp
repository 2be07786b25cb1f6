#include "osculum/curve_minimax.hpp"

#include <algorithm>

namespace osculum {

namespace {

// Candidate integer directions in {-d..d}^p with positive leading entry,
// smallest first (sup norm, then 1-norm, then descending lexicographic).
std::vector<std::vector<int>> candidate_directions(int p, int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(p, -d);
    for (;;) {
        bool all_zero = true;
        int lead = 0;
        for (int v : cur)
            if (v != 0) { lead = v; all_zero = false; break; }
        if (!all_zero && lead > 0) out.push_back(cur);
        int i = p - 1;
        while (i >= 0 && cur[i] == d) cur[i--] = -d;
        if (i < 0) break;
        ++cur[i];
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        auto norms = [](const std::vector<int>& v) {
            int linf = 0, l1 = 0;
            for (int x : v) { linf = std::max(linf, std::abs(x)); l1 += std::abs(x); }
            return std::make_pair(linf, l1);
        };
        auto na = norms(a), nb = norms(b);
        if (na != nb) return na < nb;
        return a > b; // descending lexicographic: prefer (1,1) over (1,-1)
    });
    return out;
}

} // namespace

WitnessCertificate find_witness_direction(const AdaptedPair& pair, int s) {
    if (s < 0) throw DomainError("witness search needs s >= 0");
    int cls = pair.class_bound();
    if (s + 1 > cls)
        throw DomainError("witness search needs s strictly below the smoothness class");
    int p = pair.p;
    std::vector<Rat> zero(p, Rat(0));
    Jet<Rat> diff = jet_of_map<Rat>(pair.Ft.graph_map, zero, s + 1) -
                    jet_of_map<Rat>(pair.F.graph_map, zero, s + 1);

    VanishingOrder nu = diff.vanishing_order();
    if (!nu.at_least && nu.value <= s)
        throw NoWitness("a coefficient of degree <= s is non-zero; the claimed order is too high");

    for (const auto& cand : candidate_directions(p, s + 1)) {
        std::vector<Rat> w(p);
        for (int i = 0; i < p; ++i) w[i] = cand[i];
        std::vector<Rat> vals = diff.eval_homogeneous(s + 1, w);
        for (int j = 0; j < static_cast<int>(vals.size()); ++j) {
            if (vals[j] == 0) continue;
            WitnessCertificate cert;
            cert.direction_exact = w;
            cert.component = j;
            cert.value_at_representative = vals[j];
            cert.lower_degrees_vanish = true;
            // Canonical pair along w: the contact order comes out at exactly s.
            Jet<Rat> line = CurveJet<Rat>::line(w, s + 1).curve;
            Jet<Rat> composed = jet_compose(diff, line);
            VanishingOrder cv = composed.vanishing_order();
            if (cv.at_least || cv.value != s + 1)
                throw Error("internal: witness certification failed");
            cert.canonical_contact = s;
            double norm2 = 0;
            cert.direction.resize(p);
            for (int i = 0; i < p; ++i) {
                cert.direction[i] = to_double(w[i]);
                norm2 += cert.direction[i] * cert.direction[i];
            }
            double norm = std::sqrt(norm2);
            for (double& v : cert.direction) v /= norm;
            cert.value_at_unit =
                to_double(vals[j]) / std::pow(norm, static_cast<double>(s + 1));
            return cert;
        }
    }
    throw NoWitness("the degree-(s+1) homogeneous part vanishes identically");
}

} // namespace osculum
