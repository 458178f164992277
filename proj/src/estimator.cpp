// SPDX-License-Identifier: Apache-2.0
//
// abp-sim: auxiliary beam pair angle estimation for mmWave MIMO links
// Copyright (C) 2026 The abp-sim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "abp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>

namespace abp
{
    RatioMetric ratio_metric(double power_delta, double power_sigma)
    {
        if (power_delta < 0.0 || power_sigma < 0.0)
            throw Error(ErrorCode::InvalidArgument, "powers must be non-negative");
        const double s = power_delta + power_sigma;
        if (s <= 0.0)
            throw Error(ErrorCode::BothZero, "both pair powers are zero");
        return {std::clamp((power_delta - power_sigma) / s, -1.0, 1.0), power_delta, power_sigma};
    }

    double ratio_model(double x, double delta)
    {
        return -std::sin(x) * std::sin(delta) / (1.0 - std::cos(x) * std::cos(delta));
    }

    namespace
    {
        // |a(y)^H a(0)|^2 for an n-element ULA
        double beam_power(double y, int n)
        {
            const double s = std::sin(0.5 * y);
            if (std::abs(s) < 1e-300)
                return 1.0;
            const double d = std::sin(0.5 * n * y) / (n * s);
            return d * d;
        }

        constexpr double zeta_limit = 0.999999;
    }

    double array_factor_ratio(double x, double delta, int n)
    {
        const double pd = beam_power(x + delta, n), ps = beam_power(x - delta, n);
        return (pd - ps) / (pd + ps);
    }

    double invert_ratio(double zeta, double center, double delta)
    {
        const double z = std::clamp(zeta, -zeta_limit, zeta_limit);
        const double sd = std::sin(delta), c = std::cos(delta);
        const double arg = (z * sd - z * std::sqrt(1.0 - z * z) * sd * c) / (sd * sd + z * z * c * c);
        const double mu = center - std::asin(std::clamp(arg, -1.0, 1.0));
        return std::clamp(mu, center - delta, center + delta);
    }

    double invert_ratio_exact(double zeta, double center, double delta, int n)
    {
        const double z = std::clamp(zeta, -zeta_limit, zeta_limit);
        // ratio decreases monotonically in x over [-delta, delta]
        double lo = -delta, hi = delta;
        if (z >= array_factor_ratio(lo, delta, n))
            return center + lo;
        if (z <= array_factor_ratio(hi, delta, n))
            return center + hi;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (array_factor_ratio(mid, delta, n) > z)
                lo = mid;
            else
                hi = mid;
        }
        return center + 0.5 * (lo + hi);
    }

    namespace
    {
        // CN(0, sigma^2) samples; keeps one distribution so paired normals are not discarded
        struct ComplexNormal
        {
            explicit ComplexNormal(double sigma) : n(0.0, sigma / std::sqrt(2.0)) {}
            cd operator()(std::mt19937_64 &rng)
            {
                const double re = n(rng);
                const double im = n(rng);
                return {re, im};
            }
            std::normal_distribution<double> n;
        };

        double noise_sigma(double gamma)
        {
            if (!(gamma > 0.0))
                throw Error(ErrorCode::InvalidArgument, "SNR must be positive");
            return std::isinf(gamma) ? 0.0 : std::sqrt(1.0 / gamma);
        }
    }

    cd received_symbol(const CVector &w, const CMatrix &Hk, const CVector &f, cd s, double sigma, std::mt19937_64 &rng)
    {
        if (w.size() != Hk.rows() || f.size() != Hk.cols())
            throw Error(ErrorCode::DimensionMismatch, "beam dimensions do not match the channel");
        cd y = w.dot(Hk * f) * s;
        if (sigma > 0.0)
        {
            ComplexNormal cn(sigma);
            CVector n(w.size());
            for (Eigen::Index i = 0; i < n.size(); ++i)
                n(i) = cn(rng);
            y += w.dot(n);
        }
        return y;
    }

    Eigen::MatrixXd measure_power_grid(const ChannelRealization &ch, const Codebooks &cb, double gamma,
                                       std::mt19937_64 &rng)
    {
        const double sigma = noise_sigma(gamma);
        ComplexNormal cn(sigma);
        const int R = int(cb.rx.size()), T = int(cb.tx.size()), N = ch.n_subcarriers();
        if (N == 0 || ch.H[0].rows() != cb.rx[0].vector.size() || ch.H[0].cols() != cb.tx[0].vector.size())
            throw Error(ErrorCode::DimensionMismatch, "codebooks do not match the channel");
        CMatrix Wall(ch.H[0].rows(), R), Fall(ch.H[0].cols(), T);
        for (int j = 0; j < R; ++j)
            Wall.col(j) = cb.rx[j].vector;
        for (int t = 0; t < T; ++t)
            Fall.col(t) = cb.tx[t].vector;

        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(R, T);
        for (int k = 0; k < N; ++k)
        {
            const CMatrix G = Wall.adjoint() * ch.H[k] * Fall;
            for (int t = 0; t < T; ++t)
                for (int j = 0; j < R; ++j)
                {
                    cd y = G(j, t);
                    if (sigma > 0.0)
                        y += cn(rng);
                    P(j, t) += std::norm(y);
                }
        }
        return P / double(N);
    }

    namespace
    {
        using Lookup = std::function<double(int rx, int tx)>;

        PairMeasurement make_pair(Axis axis, Pol pol, int id_a, double bs_a, double p_a, int id_b, double bs_b,
                                  double p_b, int n, RatioInversion inv)
        {
            if (bs_a > bs_b)
            {
                std::swap(id_a, id_b);
                std::swap(bs_a, bs_b);
                std::swap(p_a, p_b);
            }
            PairMeasurement m;
            m.axis = axis;
            m.pol = pol;
            m.beams[0] = id_a;
            m.beams[1] = id_b;
            m.center = 0.5 * (bs_a + bs_b);
            m.delta = 0.5 * (bs_b - bs_a);
            p_a = std::max(p_a, 0.0);
            p_b = std::max(p_b, 0.0);
            if (p_a + p_b <= 0.0)
                m.zeta = {0.0, p_a, p_b};
            else
                m.zeta = ratio_metric(p_a, p_b);
            m.mu_hat = inv == RatioInversion::closed_form ? invert_ratio(m.zeta.value, m.center, m.delta)
                                                          : invert_ratio_exact(m.zeta.value, m.center, m.delta, n);
            return m;
        }

        struct Neighbor
        {
            int id = -1;
            double boresight = 0.0;
            double power = -1.0;
        };

        Neighbor stronger(const std::vector<Neighbor> &cands, const char *what)
        {
            Neighbor best;
            for (const auto &c : cands)
                if (c.power >= 0.0 && (best.id < 0 || c.power > best.power))
                    best = c;
            if (best.id < 0)
                throw Error(ErrorCode::InsufficientNeighbors, std::string("no observed ") + what + " neighbour of the same polarization");
            return best;
        }

        PathEstimate estimate_at(int t, int j, const Codebooks &cb, const Lookup &S, RatioInversion inv)
        {
            const Beam &tb = cb.tx[t];
            const Beam &rb = cb.rx[j];
            const int el = tb.el_index, az = tb.az_index;
            PathEstimate pe;
            pe.tx_beam = t;
            pe.rx_beam = j;
            pe.strength = S(j, t);

            std::vector<Neighbor> nb;
            for (int d : {-1, 1})
            {
                const int a2 = az + d;
                if (a2 >= 0 && a2 < cb.n_az() && cb.az_pol(a2) == tb.pol)
                {
                    const int id = cb.tx_index(el, a2);
                    nb.push_back({id, cb.az_boresights[a2], S(j, id)});
                }
            }
            Neighbor n = stronger(nb, "azimuth");
            pe.az = make_pair(Axis::azimuth, tb.pol, t, tb.mu_az, pe.strength, n.id, n.boresight, n.power,
                              cb.arrays.n_y, inv);

            nb.clear();
            for (int d : {-1, 1})
            {
                const int e2 = el + d;
                if (e2 >= 0 && e2 < cb.n_el())
                {
                    const int id = cb.tx_index(e2, az);
                    nb.push_back({id, cb.el_boresights[e2], S(j, id)});
                }
            }
            n = stronger(nb, "elevation");
            pe.el = make_pair(Axis::elevation, tb.pol, t, tb.mu_el, pe.strength, n.id, n.boresight, n.power,
                              cb.arrays.n_x, inv);

            nb.clear();
            const int R = int(cb.rx.size());
            for (int d : {-1, 1})
            {
                const int n2 = j + d;
                if (n2 >= 0 && n2 < R && cb.rx_pol(n2) == rb.pol)
                    nb.push_back({n2, cb.rx_boresights[n2], S(n2, t)});
            }
            n = stronger(nb, "receive");
            pe.rx = make_pair(Axis::receive, rb.pol, j, rb.nu, pe.strength, n.id, n.boresight, n.power,
                              cb.arrays.rx_per_pol(), inv);

            pe.mu = {pe.el.mu_hat, pe.az.mu_hat, pe.rx.mu_hat};
            pe.angles = angles_from(pe.mu, cb.arrays, &pe.degenerate);
            return pe;
        }

        PathEstimate boresight_estimate(int t, int j, const Codebooks &cb, double strength)
        {
            PathEstimate pe;
            pe.tx_beam = t;
            pe.rx_beam = j;
            pe.strength = strength;
            pe.mu = {cb.tx[t].mu_el, cb.tx[t].mu_az, cb.rx[j].nu};
            pe.angles = angles_from(pe.mu, cb.arrays, &pe.degenerate);
            return pe;
        }

        std::pair<int, int> argmax(const Eigen::MatrixXd &P)
        {
            int bt = -1, bj = -1;
            double best = 0.0;
            for (int t = 0; t < P.cols(); ++t)
                for (int j = 0; j < P.rows(); ++j)
                    if (P(j, t) > best)
                    {
                        best = P(j, t);
                        bt = t;
                        bj = j;
                    }
            if (bt < 0)
                throw Error(ErrorCode::NoSignal, "no beam combination received any power");
            return {bt, bj};
        }

        bool adjacent(const Codebooks &cb, int t1, int j1, int t2, int j2)
        {
            const Beam &a = cb.tx[t1], &b = cb.tx[t2];
            const bool tx_near = a.pol == b.pol && std::abs(a.el_index - b.el_index) <= 1 &&
                                 std::abs(a.az_index - b.az_index) <= 1;
            const bool rx_near = cb.rx[j1].pol == cb.rx[j2].pol && std::abs(j1 - j2) <= 1;
            return tx_near && rx_near;
        }

        struct Candidate
        {
            double s;
            int j, t;
        };

        std::vector<Candidate> select(std::vector<Candidate> cands, const Codebooks &cb, int n_select, bool suppress)
        {
            std::sort(cands.begin(), cands.end(), [](const Candidate &a, const Candidate &b)
                      {
                          if (a.s != b.s)
                              return a.s > b.s;
                          if (a.t != b.t)
                              return a.t < b.t;
                          return a.j < b.j; });
            std::vector<Candidate> out;
            for (const auto &c : cands)
            {
                if (int(out.size()) >= n_select || c.s <= 0.0)
                    break;
                bool skip = false;
                if (suppress)
                    for (const auto &o : out)
                        skip = skip || adjacent(cb, c.t, c.j, o.t, o.j);
                if (!skip)
                    out.push_back(c);
            }
            if (out.empty())
                throw Error(ErrorCode::NoSignal, "no beam combination received any power");
            return out;
        }
    }

    EstimationReport estimate_single_path(const Eigen::MatrixXd &P, const Codebooks &cb, const EstimatorOptions &opt)
    {
        const auto [t, j] = argmax(P);
        EstimationReport rep;
        rep.paths.push_back(estimate_at(t, j, cb, [&](int r, int c)
                                        { return P(r, c); }, opt.inversion));
        rep.iterations = std::int64_t(P.rows()) * P.cols();
        return rep;
    }

    EstimationReport estimate_single_path(const ChannelRealization &ch, const Codebooks &cb, double gamma,
                                          std::mt19937_64 &rng, const EstimatorOptions &opt)
    {
        return estimate_single_path(measure_power_grid(ch, cb, gamma, rng), cb, opt);
    }

    EstimationReport gob_estimate(const Eigen::MatrixXd &P, const Codebooks &cb)
    {
        const auto [t, j] = argmax(P);
        EstimationReport rep;
        rep.paths.push_back(boresight_estimate(t, j, cb, P(j, t)));
        rep.iterations = std::int64_t(P.rows()) * P.cols();
        return rep;
    }

    EstimationReport gob_estimate(const ChannelRealization &ch, const Codebooks &cb, double gamma, std::mt19937_64 &rng)
    {
        return gob_estimate(measure_power_grid(ch, cb, gamma, rng), cb);
    }

    StrengthMap measure_pilot_strengths(const ChannelRealization &ch, const Codebooks &cb, const ProbingPlan &plan,
                                        const PilotAssignment &pilots, double gamma, std::mt19937_64 &rng,
                                        const EstimatorOptions &opt)
    {
        const double sigma = noise_sigma(gamma);
        ComplexNormal cn(sigma);
        const int R = int(cb.rx.size()), T = int(cb.tx.size()), N = ch.n_subcarriers();
        if (N == 0 || ch.H[0].rows() != cb.rx[0].vector.size() || ch.H[0].cols() != cb.tx[0].vector.size())
            throw Error(ErrorCode::DimensionMismatch, "codebooks do not match the channel");
        if (int(pilots.beam_labels.size()) != T || pilots.n_subcarriers != N)
            throw Error(ErrorCode::DimensionMismatch, "pilot assignment does not cover the transmit codebook");
        const int window = std::clamp(opt.window > 0 ? opt.window : ch.ofdm.cp_length, 1, N);
        const int M = int(ch.H[0].rows());

        CMatrix Wall(M, R), Fall(ch.H[0].cols(), T);
        for (int j = 0; j < R; ++j)
            Wall.col(j) = cb.rx[j].vector;
        for (int t = 0; t < T; ++t)
            Fall.col(t) = cb.tx[t].vector;
        std::vector<CMatrix> G(N);
        for (int k = 0; k < N; ++k)
            G[k] = Wall.adjoint() * ch.H[k] * Fall;
        std::vector<CVector> X(T);
        for (int t = 0; t < T; ++t)
            X[t] = pilots.symbols(pilots.beam_labels[t]);

        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(R, T);
        Eigen::MatrixXi cnt = Eigen::MatrixXi::Zero(R, T);
        StrengthMap map;
        map.rx_probing_sum.assign(plan.m_t(), 0.0);

        for (int m = 0; m < plan.m_t(); ++m)
        {
            const auto &rows = plan.rx[m];
            const int mr = int(rows.size());
            CMatrix Wm(M, mr);
            for (int jj = 0; jj < mr; ++jj)
                Wm.col(jj) = Wall.col(rows[jj]);

            // noise seen through the combiners: L z with L L^* = Wm^* Wm
            const CMatrix Lw = Eigen::LLT<CMatrix>(Wm.adjoint() * Wm).matrixL();
            CVector z(mr);

            for (int t = 0; t < plan.n_t(); ++t)
            {
                const auto &cols = plan.tx[t];
                const int nr = int(cols.size());
                CMatrix Y(mr, N);
                for (int k = 0; k < N; ++k)
                {
                    for (int jj = 0; jj < mr; ++jj)
                    {
                        cd acc = 0.0;
                        for (int ii = 0; ii < nr; ++ii)
                            acc += G[k](rows[jj], cols[ii]) * X[cols[ii]](k);
                        Y(jj, k) = acc;
                    }
                    if (sigma > 0.0)
                    {
                        for (int i = 0; i < mr; ++i)
                            z(i) = cn(rng);
                        Y.col(k) += Lw * z;
                    }
                }

                for (int ii = 0; ii < nr; ++ii)
                {
                    const PilotLabel &ref = pilots.beam_labels[cols[ii]];
                    std::vector<int> excl;
                    for (int i2 = 0; i2 < nr; ++i2)
                    {
                        const PilotLabel &o = pilots.beam_labels[cols[i2]];
                        if (i2 != ii && o.root == ref.root && o.b != ref.b)
                            excl.push_back(replica_lag(ref.root, pilots.p, o.b - ref.b, pilots.seq_length, N) -
                                           opt.replica_guard);
                    }
                    for (int jj = 0; jj < mr; ++jj)
                    {
                        const double s = windowed_strength(Y.row(jj).transpose(), X[cols[ii]], window, excl,
                                                           window + 2 * opt.replica_guard);
                        sum(rows[jj], cols[ii]) += s;
                        cnt(rows[jj], cols[ii]) += 1;
                        map.rx_probing_sum[m] += s;
                    }
                }
            }
        }

        map.strength = Eigen::MatrixXd::Constant(R, T, -1.0);
        for (int j = 0; j < R; ++j)
            for (int t = 0; t < T; ++t)
                if (cnt(j, t) > 0)
                    map.strength(j, t) = sum(j, t) / cnt(j, t);
        return map;
    }

    EstimationReport estimate_multipath(const StrengthMap &map, const Codebooks &cb, const ProbingPlan &plan,
                                        int n_select, const EstimatorOptions &opt)
    {
        if (n_select < 1)
            throw Error(ErrorCode::InvalidArgument, "n_select must be positive");
        int best_m = -1;
        double best = 0.0;
        for (int m = 0; m < plan.m_t(); ++m)
            if (map.rx_probing_sum[m] > best)
            {
                best = map.rx_probing_sum[m];
                best_m = m;
            }
        if (best_m < 0)
            throw Error(ErrorCode::NoSignal, "no receive probing observed any signal");

        std::vector<Candidate> cands;
        std::vector<int> rows = plan.rx[best_m];
        std::sort(rows.begin(), rows.end());
        for (int j : rows)
            for (int t = 0; t < map.strength.cols(); ++t)
                if (map.strength(j, t) >= 0.0)
                    cands.push_back({map.strength(j, t), j, t});

        EstimationReport rep;
        const Lookup S = [&](int r, int c)
        { return map.strength(r, c); };
        for (const auto &c : select(cands, cb, n_select, opt.suppress_adjacent))
            rep.paths.push_back(estimate_at(c.t, c.j, cb, S, opt.inversion));
        rep.iterations = std::int64_t(plan.n_rf) * plan.n_t() * plan.m_rf * plan.m_t();
        return rep;
    }

    EstimationReport estimate_multipath(const ChannelRealization &ch, const Codebooks &cb, const ProbingPlan &plan,
                                        const PilotAssignment &pilots, double gamma, int n_select, std::mt19937_64 &rng,
                                        const EstimatorOptions &opt)
    {
        const auto map = measure_pilot_strengths(ch, cb, plan, pilots, gamma, rng, opt);
        return estimate_multipath(map, cb, plan, n_select, opt);
    }

    EstimationReport gob_multipath(const ChannelRealization &ch, const Codebooks &cb, double gamma, int n_select,
                                   std::mt19937_64 &rng)
    {
        const Eigen::MatrixXd P = measure_power_grid(ch, cb, gamma, rng);
        std::vector<Candidate> cands;
        for (int j = 0; j < P.rows(); ++j)
            for (int t = 0; t < P.cols(); ++t)
                cands.push_back({P(j, t), j, t});
        EstimationReport rep;
        for (const auto &c : select(cands, cb, n_select, true))
            rep.paths.push_back(boresight_estimate(c.t, c.j, cb, c.s));
        rep.iterations = std::int64_t(P.rows()) * P.cols();
        return rep;
    }

    CrossTermSplit cross_term_split(const ChannelRealization &ch, int path, const CVector &w, const CVector &f)
    {
        if (ch.arrays.cross())
            throw Error(ErrorCode::DimensionMismatch, "cross-term split expects a co-polarized channel");
        const auto &p = ch.paths.at(path);
        const auto sf = spatial_frequencies(p.angles, ch.arrays);
        const CVector ar = ula_steering(sf.nu, ch.arrays.m_tot);
        const CVector at = upa_steering(sf.mu_x, sf.mu_y, ch.arrays.n_x, ch.arrays.n_y);
        const cd lead = ch.gain_scale * p.g_vv * pulse_coefficient(p.tau, 0, ch.ofdm) * w.dot(ar) * at.dot(f);
        const cd total = w.dot(ch.H.at(0) * f);
        return {std::norm(lead), std::abs(std::norm(total) - std::norm(lead))};
    }

    void write_estimation_csv_header(std::ostream &os)
    {
        os << "trial,path,true_theta_deg,true_phi_deg,true_psi_deg,est_theta_deg,est_phi_deg,est_psi_deg,"
              "mu_x,mu_y,nu,err_theta_deg,err_phi_deg,err_psi_deg,tx_beam,rx_beam,zeta_el,zeta_az,zeta_rx,iterations\n";
    }

    void write_estimation_csv(std::ostream &os, int trial, const std::vector<AngleSet> &truth, const EstimationReport &rep)
    {
        os << std::setprecision(10);
        for (std::size_t i = 0; i < rep.paths.size(); ++i)
        {
            const auto &e = rep.paths[i];
            os << trial << ',' << i << ',';
            if (i < truth.size())
                os << rad2deg(truth[i].theta) << ',' << rad2deg(truth[i].phi) << ',' << rad2deg(truth[i].psi) << ',';
            else
                os << ",,,";
            os << rad2deg(e.angles.theta) << ',' << rad2deg(e.angles.phi) << ',' << rad2deg(e.angles.psi) << ','
               << e.mu.mu_x << ',' << e.mu.mu_y << ',' << e.mu.nu << ',';
            if (i < truth.size())
                os << rad2deg(std::abs(truth[i].theta - e.angles.theta)) << ','
                   << rad2deg(std::abs(wrap_angle(truth[i].phi - e.angles.phi))) << ','
                   << rad2deg(std::abs(truth[i].psi - e.angles.psi)) << ',';
            else
                os << ",,,";
            os << e.tx_beam << ',' << e.rx_beam << ',' << e.el.zeta.value << ',' << e.az.zeta.value << ','
               << e.rx.zeta.value << ',' << rep.iterations << "\n";
        }
    }
}
