#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace paraxfem {

/// Gauss-Legendre rule on the reference element [0,1].
struct QuadratureRule {
    std::vector<double> points;  // in (0,1)
    std::vector<double> weights; // sum to 1
    int order = 0;               // exact for polynomials of degree <= order

    std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre rule mapped from [-1,1] to [0,1].
/// Exact for polynomials of degree <= 2n-1.
inline QuadratureRule gauss_legendre(int n) {
    // Abscissae/weights on [-1,1] to 20 significant digits, positive half.
    static const std::array<std::vector<std::array<double, 2>>, 12> tables = {{
        {{{0.0, 2.0}}},
        {{{0.5773502691896257645, 1.0}}},
        {{{0.0, 0.8888888888888888889}, {0.7745966692414833770, 0.5555555555555555556}}},
        {{{0.3399810435848562648, 0.6521451548625461426},
          {0.8611363115940525752, 0.3478548451374538574}}},
        {{{0.0, 0.5688888888888888889},
          {0.5384693101056830910, 0.4786286704993664680},
          {0.9061798459386639928, 0.2369268850561890875}}},
        {{{0.2386191860831969086, 0.4679139345726910474},
          {0.6612093864662645137, 0.3607615730481386076},
          {0.9324695142031520278, 0.1713244923791703450}}},
        {{{0.0, 0.4179591836734693878},
          {0.4058451513773971669, 0.3818300505051189449},
          {0.7415311855993944399, 0.2797053914892766679},
          {0.9491079123427585245, 0.1294849661688696933}}},
        {{{0.1834346424956498049, 0.3626837833783619830},
          {0.5255324099163289858, 0.3137066458778872873},
          {0.7966664774136267396, 0.2223810344533744705},
          {0.9602898564975362317, 0.1012285362903762592}}},
        {{{0.0, 0.3302393550012597632},
          {0.3242534234038089290, 0.3123470770400028400},
          {0.6133714327005903973, 0.2606106964029354623},
          {0.8360311073266357943, 0.1806481606948574041},
          {0.9681602395076260898, 0.0812743883615744120}}},
        {{{0.1488743389816312108, 0.2955242247147528701},
          {0.4333953941292471908, 0.2692667193099963551},
          {0.6794095682990244062, 0.2190863625159820440},
          {0.8650633666889845107, 0.1494513491505805931},
          {0.9739065285171717200, 0.0666713443086881376}}},
        {{{0.0, 0.2729250867779006307},
          {0.2695431559523449724, 0.2628045445102466622},
          {0.5190961292068118159, 0.2331937645919904799},
          {0.7301520055740493241, 0.1862902109277342515},
          {0.8870625997680952990, 0.1255803694649046247},
          {0.9782286581460569928, 0.0556685671161736665}}},
        {{{0.1252334085114689155, 0.2491470458134027850},
          {0.3678314989981801938, 0.2334925365383548087},
          {0.5873179542866174473, 0.2031674267230659217},
          {0.7699026741943046870, 0.1600783285433462264},
          {0.9041172563704748567, 0.1069393259953184310},
          {0.9815606342467192506, 0.0471753363865118272}}},
    }};

    if (n < 1 || n > 12)
        throw std::invalid_argument("gauss_legendre: supported orders are 1..12");

    QuadratureRule rule;
    rule.order = 2 * n - 1;
    const auto& half = tables[static_cast<std::size_t>(n - 1)];
    // Expand the symmetric half-table and map x -> (x+1)/2, w -> w/2.
    std::vector<double> xs, ws;
    for (const auto& pw : half) {
        if (pw[0] == 0.0) {
            xs.push_back(0.0);
            ws.push_back(pw[1]);
        } else {
            xs.push_back(-pw[0]);
            ws.push_back(pw[1]);
            xs.push_back(pw[0]);
            ws.push_back(pw[1]);
        }
    }
    // Sort ascending for reproducibility.
    std::vector<std::size_t> idx(xs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j)
            if (xs[idx[j]] < xs[idx[i]]) std::swap(idx[i], idx[j]);
    for (std::size_t i : idx) {
        rule.points.push_back(0.5 * (xs[i] + 1.0));
        rule.weights.push_back(0.5 * ws[i]);
    }
    return rule;
}

} // namespace paraxfem
