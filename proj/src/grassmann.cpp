#include "osculum/grassmann.hpp"

namespace osculum {

std::vector<long long> chart_dimension_recursion(int p, int m, int l) {
    if (p < 1 || p >= m || l < 0)
        throw DimensionMismatch("chart dimensions need 1 <= p < m and l >= 0");
    std::vector<long long> d{m};
    for (int i = 1; i <= l; ++i) d.push_back(d.back() + p * (d.back() - p));
    return d;
}

long long chart_coordinate_count(int p, int m, int l) {
    std::vector<long long> rec = chart_dimension_recursion(p, m, l);
    long long pw = 1;
    for (int i = 0; i < l; ++i) pw *= 1 + p;
    long long count = p + static_cast<long long>(m - p) * pw;
    if (count != rec.back())
        throw Error("internal: closed-form chart count disagrees with the recursion");
    return count;
}

} // namespace osculum
