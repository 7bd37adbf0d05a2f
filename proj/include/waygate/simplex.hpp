// Copyright 2026 The waygate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace waygate {

struct SimplexOptions {
    std::size_t max_iterations = 2000;
    double diameter_tolerance = 1e-9;  // converged when every vertex is this close to the best one
    double initial_step = 0.25;
    bool record_trace = false;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
    std::vector<double> trace;  // best value after each iteration, when requested
};

/// Nelder-Mead downhill simplex with dimension-adaptive coefficients
/// (Gao & Han). Minimizes f over R^n starting from an axis-aligned simplex
/// around x0.
template <class F>
SimplexResult nelder_mead(F &&f, std::vector<double> x0, const SimplexOptions &opt = {}) {
    const std::size_t n = x0.size();
    SimplexResult res;
    if (n == 0) {
        res.x = x0;
        res.value = f(x0);
        res.evaluations = 1;
        res.converged = true;
        return res;
    }
    const double dn = static_cast<double>(n);
    const double reflect = 1.0;
    const double expand = 1.0 + 2.0 / dn;
    const double contract = 0.75 - 1.0 / (2.0 * dn);
    const double shrink = 1.0 - 1.0 / dn;

    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opt.initial_step;
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);
    res.evaluations = n + 1;

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);

    auto diameter = [&](std::size_t best) {
        double d = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double dk = pts[i][k] - pts[best][k];
                s += dk * dk;
            }
            d = std::max(d, s);
        }
        return std::sqrt(d);
    };
    auto along = [&](std::vector<double> &out, double t, const std::vector<double> &from) {
        for (std::size_t k = 0; k < n; ++k) out[k] = centroid[k] + t * (from[k] - centroid[k]);
    };

    for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order[0];
        const std::size_t worst = order[n];
        const std::size_t second = order[n - 1];
        if (diameter(best) < opt.diameter_tolerance) {
            res.converged = true;
            break;
        }
        if (opt.record_trace) res.trace.push_back(vals[best]);

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k];
        }
        for (auto &c : centroid) c /= dn;

        along(trial, -reflect, pts[worst]);
        const double fr = f(trial);
        ++res.evaluations;
        if (fr < vals[best]) {
            along(trial2, -reflect * expand, pts[worst]);
            const double fe = f(trial2);
            ++res.evaluations;
            if (fe < fr) {
                pts[worst] = trial2;
                vals[worst] = fe;
            } else {
                pts[worst] = trial;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = trial;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        along(trial2, outside ? -reflect * contract : contract, pts[worst]);
        const double fc = f(trial2);
        ++res.evaluations;
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = trial2;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[best][k] + shrink * (pts[i][k] - pts[best][k]);
            vals[i] = f(pts[i]);
            ++res.evaluations;
        }
    }

    const auto it = std::min_element(vals.begin(), vals.end());
    const auto idx = static_cast<std::size_t>(it - vals.begin());
    res.x = pts[idx];
    res.value = *it;
    return res;
}

}  // namespace waygate
