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

#include "abp/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

namespace abp
{
    const char *axis_name(Axis a)
    {
        switch (a)
        {
        case Axis::azimuth: return "azimuth";
        case Axis::elevation: return "elevation";
        case Axis::receive: return "receive";
        }
        return "?";
    }

    const char *pol_name(Pol p) { return p == Pol::v ? "v" : "h"; }

    PairSpacing PairSpacing::half_power(const ArrayConfig &cfg)
    {
        return {pi / (2.0 * cfg.n_x), pi / (2.0 * cfg.n_y), pi / (2.0 * cfg.rx_per_pol())};
    }

    PairSpacing PairSpacing::grid(const ArrayConfig &cfg, int l_x, int l_y, int l_r)
    {
        return {2.0 * l_x * pi / cfg.n_x, 2.0 * l_y * pi / cfg.n_y, 2.0 * l_r * pi / cfg.rx_per_pol()};
    }

    Pol Codebooks::az_pol(int az) const { return az < az_split ? Pol::v : Pol::h; }
    Pol Codebooks::rx_pol(int n) const { return n < rx_split ? Pol::v : Pol::h; }

    std::vector<int> Codebooks::tx_ids(Pol p) const
    {
        std::vector<int> out;
        for (const auto &b : tx)
            if (b.pol == p)
                out.push_back(b.index);
        return out;
    }

    std::vector<int> Codebooks::rx_ids(Pol p) const
    {
        std::vector<int> out;
        for (const auto &b : rx)
            if (b.pol == p)
                out.push_back(b.index);
        return out;
    }

    Pol Codebooks::tx_pol_for(double mu_y) const
    {
        if (az_split >= n_az())
            return Pol::v;
        const double edge = 0.5 * (az_boresights[az_split - 1] + az_boresights[az_split]);
        return mu_y < edge ? Pol::v : Pol::h;
    }

    Pol Codebooks::rx_pol_for(double nu) const
    {
        const int n = int(rx_boresights.size());
        if (rx_split >= n)
            return Pol::v;
        const double edge = 0.5 * (rx_boresights[rx_split - 1] + rx_boresights[rx_split]);
        return nu < edge ? Pol::v : Pol::h;
    }

    CVector Codebooks::tx_vector(double mu_x, double mu_y, Pol p) const
    {
        const CVector a = upa_steering(mu_x, mu_y, arrays.n_x, arrays.n_y);
        if (!arrays.cross())
            return a;
        const int n = arrays.tx_per_pol();
        CVector out = CVector::Zero(2 * n);
        out.segment(p == Pol::v ? 0 : n, n) = a;
        return out;
    }

    CVector Codebooks::rx_vector(double nu, Pol p) const
    {
        const int m = arrays.rx_per_pol();
        const CVector a = ula_steering(nu, m);
        if (!arrays.cross())
            return a;
        CVector out = CVector::Zero(2 * m);
        out.segment(p == Pol::v ? 0 : m, m) = a;
        return out;
    }

    std::vector<double> boresight_grid(double width, double delta)
    {
        if (!(width > 0.0))
            throw Error(ErrorCode::EmptyRange, "coverage range must be positive");
        if (!(delta > 0.0))
            throw Error(ErrorCode::InvalidArgument, "pair spacing must be positive");
        const int n = std::max(1, int(std::ceil(width / (2.0 * delta) - 1e-9)));
        std::vector<double> b(n);
        for (int i = 0; i < n; ++i)
            b[i] = (i - 0.5 * (n - 1)) * 2.0 * delta;
        return b;
    }

    Codebooks build_codebooks(const ArrayConfig &cfg, const CoverageSectors &sectors, std::optional<PairSpacing> deltas)
    {
        cfg.validate();
        Codebooks cb;
        cb.arrays = cfg;
        cb.sectors = sectors;
        cb.deltas = deltas ? *deltas : PairSpacing::half_power(cfg);
        cb.el_boresights = boresight_grid(sectors.elevation, cb.deltas.delta_x);
        cb.az_boresights = boresight_grid(sectors.azimuth, cb.deltas.delta_y);
        cb.rx_boresights = boresight_grid(sectors.receive, cb.deltas.delta_r);

        const int n_az = cb.n_az(), n_rx = int(cb.rx_boresights.size());
        cb.az_split = cfg.cross() ? (n_az + 1) / 2 : n_az;
        cb.rx_split = cfg.cross() ? (n_rx + 1) / 2 : n_rx;

        for (int e = 0; e < cb.n_el(); ++e)
            for (int a = 0; a < n_az; ++a)
            {
                Beam b;
                b.pol = cb.az_pol(a);
                b.mu_el = cb.el_boresights[e];
                b.mu_az = cb.az_boresights[a];
                b.el_index = e;
                b.az_index = a;
                b.index = cb.tx_index(e, a);
                b.vector = cb.tx_vector(b.mu_el, b.mu_az, b.pol);
                cb.tx.push_back(std::move(b));
            }
        for (int n = 0; n < n_rx; ++n)
        {
            Beam b;
            b.pol = cb.rx_pol(n);
            b.nu = cb.rx_boresights[n];
            b.index = n;
            b.vector = cb.rx_vector(b.nu, b.pol);
            cb.rx.push_back(std::move(b));
        }
        return cb;
    }

    std::vector<AuxiliaryBeamPair> enumerate_abps(const Codebooks &cb)
    {
        std::vector<AuxiliaryBeamPair> out;
        auto emit = [&](Axis axis, Pol pol, int b0, int b1, double lo, double hi)
        {
            AuxiliaryBeamPair p;
            p.abp_id = int(out.size());
            p.axis = axis;
            p.pol = pol;
            p.beams[0] = b0;
            p.beams[1] = b1;
            p.center_mu = 0.5 * (lo + hi);
            p.delta = 0.5 * (hi - lo);
            out.push_back(p);
        };

        const int n_az = cb.n_az(), n_el = cb.n_el(), n_rx = int(cb.rx.size());
        for (Pol pol : {Pol::v, Pol::h})
            for (int a = 0; a + 1 < n_az; ++a)
            {
                if (cb.az_pol(a) != pol || cb.az_pol(a + 1) != pol)
                    continue;
                for (int e = 0; e < n_el; ++e)
                    emit(Axis::azimuth, pol, cb.tx_index(e, a), cb.tx_index(e, a + 1), cb.az_boresights[a],
                         cb.az_boresights[a + 1]);
            }
        for (Pol pol : {Pol::v, Pol::h})
            for (int e = 0; e + 1 < n_el; ++e)
                for (int a = 0; a < n_az; ++a)
                {
                    if (cb.az_pol(a) != pol)
                        continue;
                    emit(Axis::elevation, pol, cb.tx_index(e, a), cb.tx_index(e + 1, a), cb.el_boresights[e],
                         cb.el_boresights[e + 1]);
                }
        for (Pol pol : {Pol::v, Pol::h})
            for (int n = 0; n + 1 < n_rx; ++n)
            {
                if (cb.rx_pol(n) != pol || cb.rx_pol(n + 1) != pol)
                    continue;
                emit(Axis::receive, pol, n, n + 1, cb.rx_boresights[n], cb.rx_boresights[n + 1]);
            }
        return out;
    }

    CMatrix ProbingPlan::F(const Codebooks &cb, int t) const
    {
        const auto &cols = tx.at(t);
        CMatrix out(cb.arrays.n_tot(), int(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c)
            out.col(c) = cb.tx.at(cols[c]).vector;
        return out;
    }

    CMatrix ProbingPlan::W(const Codebooks &cb, int m) const
    {
        const auto &cols = rx.at(m);
        CMatrix out(cb.rx.at(0).vector.size(), int(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c)
            out.col(c) = cb.rx.at(cols[c]).vector;
        return out;
    }

    namespace
    {
        // Fills n_probe probings of `cols` distinct ids each. With coverage on, ids
        // are consumed from a shuffled queue first so every id is used before repeats.
        void fill_columns(std::vector<std::vector<int>> &probings, const std::vector<int> &ids, int cols,
                          bool coverage, std::mt19937_64 &rng, const char *what)
        {
            const int n_probe = int(probings.size());
            if (cols > int(ids.size()))
                throw Error(ErrorCode::InfeasibleCoverage, std::string(what) + ": more RF chains than codebook beams");
            if (coverage && std::int64_t(n_probe) * cols < std::int64_t(ids.size()))
                throw Error(ErrorCode::InfeasibleCoverage,
                            std::string(what) + ": " + std::to_string(n_probe) + " probings of " + std::to_string(cols) +
                                " columns cannot cover " + std::to_string(ids.size()) + " beams");

            std::vector<int> queue = ids;
            std::shuffle(queue.begin(), queue.end(), rng);
            std::size_t head = 0;
            for (auto &probe : probings)
            {
                std::vector<int> chosen;
                for (int c = 0; c < cols; ++c)
                {
                    // queue entries are unique and random fills start only once it is drained
                    int pick = -1;
                    if (coverage && head < queue.size())
                        pick = queue[head++];
                    if (pick < 0)
                    {
                        std::vector<int> free;
                        for (int id : ids)
                            if (std::find(chosen.begin(), chosen.end(), id) == chosen.end())
                                free.push_back(id);
                        std::uniform_int_distribution<std::size_t> d(0, free.size() - 1);
                        pick = free[d(rng)];
                    }
                    chosen.push_back(pick);
                }
                probe.insert(probe.end(), chosen.begin(), chosen.end());
            }
        }

        void plan_side(std::vector<std::vector<int>> &probings, const std::vector<int> &all, const std::vector<int> &v_ids,
                       const std::vector<int> &h_ids, int n_rf, ProbingLayout layout, bool coverage, std::mt19937_64 &rng,
                       const char *what)
        {
            if (layout == ProbingLayout::random)
            {
                fill_columns(probings, all, n_rf, coverage, rng, what);
                return;
            }
            if (n_rf % 2 != 0 || h_ids.empty())
                throw Error(ErrorCode::InvalidArgument, std::string(what) + ": split-half layout needs an even RF count and a cross-polarized codebook");
            fill_columns(probings, v_ids, n_rf / 2, coverage, rng, what);
            fill_columns(probings, h_ids, n_rf / 2, coverage, rng, what);
        }
    }

    ProbingPlan random_probing_plan(const Codebooks &cb, int n_t, int m_t, int n_rf, int m_rf, std::uint64_t seed,
                                    ProbingLayout layout, bool coverage)
    {
        if (n_t < 1 || m_t < 1 || n_rf < 1 || m_rf < 1)
            throw Error(ErrorCode::InvalidArgument, "probing counts must be positive");
        std::mt19937_64 rng(seed);
        ProbingPlan plan;
        plan.n_rf = n_rf;
        plan.m_rf = m_rf;
        plan.tx.assign(n_t, {});
        plan.rx.assign(m_t, {});

        std::vector<int> all_tx(cb.tx.size()), all_rx(cb.rx.size());
        std::iota(all_tx.begin(), all_tx.end(), 0);
        std::iota(all_rx.begin(), all_rx.end(), 0);
        plan_side(plan.tx, all_tx, cb.tx_ids(Pol::v), cb.tx_ids(Pol::h), n_rf, layout, coverage, rng, "transmit");
        plan_side(plan.rx, all_rx, cb.rx_ids(Pol::v), cb.rx_ids(Pol::h), m_rf, layout, coverage, rng, "receive");
        return plan;
    }

    ProbingPlan exhaustive_plan(const Codebooks &cb)
    {
        ProbingPlan plan;
        for (const auto &b : cb.tx)
            plan.tx.push_back({b.index});
        for (const auto &b : cb.rx)
            plan.rx.push_back({b.index});
        return plan;
    }

    void write_codebook_csv(std::ostream &os, const Codebooks &cb)
    {
        os << std::setprecision(10);
        os << "side,index,polarization,el_index,az_index,boresight_el_deg,boresight_az_deg,boresight_rx_deg\n";
        for (const auto &b : cb.tx)
            os << "tx," << b.index << ',' << pol_name(b.pol) << ',' << b.el_index << ',' << b.az_index << ','
               << rad2deg(b.mu_el) << ',' << rad2deg(b.mu_az) << ",\n";
        for (const auto &b : cb.rx)
            os << "rx," << b.index << ',' << pol_name(b.pol) << ",,,,," << rad2deg(b.nu) << "\n";
        if (!os)
            throw Error(ErrorCode::IoError, "failed writing codebook CSV");
    }
}
