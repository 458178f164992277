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

#include "abp/pilot.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <map>
#include <mutex>
#include <set>

namespace abp
{
    int pilot_sequence_length(int n_subcarriers, PilotLayout layout)
    {
        return layout == PilotLayout::dc_punctured ? n_subcarriers - 1 : n_subcarriers;
    }

    cd zc_symbol(int root, int b, int p, int n, int k)
    {
        if (n < 1)
            throw Error(ErrorCode::InvalidArgument, "sequence length must be positive");
        if (std::gcd(root, n) != 1)
            throw Error(ErrorCode::InvalidRoot, "root " + std::to_string(root) + " is not coprime with " + std::to_string(n));
        if (k < 0 || k >= n)
            throw Error(ErrorCode::OutOfRange, "symbol index out of range");
        // phase = pi * m / n with m = r q (q + 1) mod 2n
        const std::int64_t two_n = 2 * std::int64_t(n);
        const std::int64_t q = std::int64_t(k) + std::int64_t(p) * b;
        const std::int64_t qq = ((q % two_n) * ((q + 1) % two_n)) % two_n;
        const std::int64_t m = ((std::int64_t(root) % two_n + two_n) % two_n * qq) % two_n;
        return std::polar(1.0, pi * double(m) / double(n));
    }

    CVector zc_sequence(int root, int b, int p, int length)
    {
        CVector x(length);
        for (int k = 0; k < length; ++k)
            x(k) = zc_symbol(root, b, p, length, k);
        return x;
    }

    CVector pilot_symbols(int root, int b, int p, int n_subcarriers, PilotLayout layout)
    {
        if (layout == PilotLayout::analytic)
            return zc_sequence(root, b, p, n_subcarriers);
        const int L = n_subcarriers - 1, dc = n_subcarriers / 2;
        const CVector s = zc_sequence(root, b, p, L);
        CVector x = CVector::Zero(n_subcarriers);
        for (int q = 0; q < L; ++q)
            x(q < dc ? q : q + 1) = s(q);
        return x;
    }

    std::vector<int> default_root_pool(int seq_length, int count)
    {
        std::vector<int> pool;
        for (int r : {25, 29, 34})
            if (int(pool.size()) < count && r < seq_length && std::gcd(r, seq_length) == 1)
                pool.push_back(r);
        for (int r = 35; int(pool.size()) < count && r < seq_length; ++r)
            if (std::gcd(r, seq_length) == 1)
                pool.push_back(r);
        for (int r = 1; int(pool.size()) < count && r < 25 && r < seq_length; ++r)
            if (std::gcd(r, seq_length) == 1)
                pool.push_back(r);
        if (int(pool.size()) < count)
            throw Error(ErrorCode::PoolExhausted, "not enough roots coprime with " + std::to_string(seq_length));
        return pool;
    }

    bool is_prime(int n)
    {
        if (n < 2)
            return false;
        for (int d = 2; d * d <= n; ++d)
            if (n % d == 0)
                return false;
        return true;
    }

    CVector PilotAssignment::symbols(const PilotLabel &l) const
    {
        return pilot_symbols(l.root, l.b, p, n_subcarriers, layout);
    }

    int select_shift(const std::vector<int> &roots, int L, int requested)
    {
        auto valid = [&](int p)
        {
            if (p < 1 || p > L / 2)
                return false;
            for (int r : roots)
                if ((std::int64_t(r) * p) % L == 0) // db_max = 1
                    return false;
            return true;
        };
        if (valid(requested))
            return requested;
        for (int p = 2; p <= L / 2; ++p)
            if (is_prime(p) && valid(p))
                return p;
        throw Error(ErrorCode::ShiftConflict, "no prime shift p <= " + std::to_string(L / 2) + " separates the roots in use");
    }

    namespace
    {
        std::vector<int> validated_roots(const std::vector<int> &pool, int L, RootConstraint constraint, std::size_t need)
        {
            const int modulus = constraint == RootConstraint::sequence_length ? L : L - 1;
            std::vector<int> out;
            std::set<int> seen;
            for (int r : pool)
            {
                if (r <= 0 || std::gcd(r, modulus) != 1)
                    throw Error(ErrorCode::InvalidRoot, "root " + std::to_string(r) + " is not coprime with " + std::to_string(modulus));
                if (seen.insert(r).second)
                    out.push_back(r);
            }
            if (out.size() < need)
                throw Error(ErrorCode::PoolExhausted, std::to_string(need) + " pairs need distinct roots, pool has " +
                                                          std::to_string(out.size()));
            out.resize(need);
            return out;
        }
    }

    PilotAssignment assign_pilots(const std::vector<AuxiliaryBeamPair> &abps, int n_subcarriers,
                                  const std::vector<int> &root_pool, int p, PilotLayout layout, RootConstraint constraint)
    {
        PilotAssignment pa;
        pa.n_subcarriers = n_subcarriers;
        pa.seq_length = pilot_sequence_length(n_subcarriers, layout);
        pa.layout = layout;
        const auto roots = validated_roots(root_pool, pa.seq_length, constraint, abps.size());
        pa.p = select_shift(roots, pa.seq_length, p);
        pa.abp_root.assign(abps.size(), -1);
        for (std::size_t i = 0; i < abps.size(); ++i)
            pa.abp_root[abps[i].abp_id] = roots[i];
        return pa;
    }

    PilotAssignment assign_beam_pilots(const Codebooks &cb, const std::vector<AuxiliaryBeamPair> &abps, int n_subcarriers,
                                       const std::vector<int> &root_pool, int p, PilotLayout layout)
    {
        PilotAssignment pa;
        pa.n_subcarriers = n_subcarriers;
        pa.seq_length = pilot_sequence_length(n_subcarriers, layout);
        pa.layout = layout;
        pa.abp_root.assign(abps.size(), -1);

        std::vector<const AuxiliaryBeamPair *> tx_pairs;
        for (const auto &a : abps)
            if (a.axis != Axis::receive)
                tx_pairs.push_back(&a);

        const int n_beams = int(cb.tx.size());
        std::vector<int> home(n_beams, -1), home_b(n_beams, 0);
        for (std::size_t i = 0; i < tx_pairs.size(); ++i)
            for (int b = 0; b < 2; ++b)
            {
                const int beam = tx_pairs[i]->beams[b];
                if (home[beam] < 0)
                {
                    home[beam] = int(i);
                    home_b[beam] = b;
                }
            }
        const auto lonely = std::count(home.begin(), home.end(), -1);
        const auto roots = validated_roots(root_pool, pa.seq_length, RootConstraint::sequence_length,
                                           tx_pairs.size() + std::size_t(lonely));
        pa.p = select_shift(roots, pa.seq_length, p);
        for (std::size_t i = 0; i < tx_pairs.size(); ++i)
            pa.abp_root[tx_pairs[i]->abp_id] = roots[i];

        std::size_t extra = tx_pairs.size();
        pa.beam_labels.resize(n_beams);
        for (int k = 0; k < n_beams; ++k)
        {
            if (home[k] >= 0)
                pa.beam_labels[k] = {roots[home[k]], home_b[k]};
            else
                pa.beam_labels[k] = {roots[extra++], 0};
        }
        return pa;
    }

    cd correlate_zero_lag(const CVector &received, const CVector &reference)
    {
        if (received.size() != reference.size())
            throw Error(ErrorCode::LengthMismatch, "received and reference lengths differ");
        return reference.dot(received); // sum conj(x) * Y
    }

    namespace
    {
        // Backward (unscaled inverse) plan for length n. Planning is not thread-safe, execution is.
        fftw_plan inverse_plan(int n)
        {
            static std::mutex mu;
            static std::map<int, fftw_plan> plans;
            std::lock_guard<std::mutex> lock(mu);
            auto it = plans.find(n);
            if (it != plans.end())
                return it->second;
            std::vector<cd> a(n), b(n);
            fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex *>(a.data()),
                                           reinterpret_cast<fftw_complex *>(b.data()), FFTW_BACKWARD,
                                           FFTW_ESTIMATE | FFTW_UNALIGNED);
            plans.emplace(n, p);
            return p;
        }
    }

    CVector correlation_lags(const CVector &received, const CVector &reference)
    {
        if (received.size() != reference.size())
            throw Error(ErrorCode::LengthMismatch, "received and reference lengths differ");
        const Eigen::Index N = received.size();
        CVector z = received.cwiseProduct(reference.conjugate());
        CVector c(N);
        if (N > 0)
            fftw_execute_dft(inverse_plan(int(N)), reinterpret_cast<fftw_complex *>(z.data()),
                             reinterpret_cast<fftw_complex *>(c.data()));
        return c;
    }

    double windowed_strength(const CVector &received, const CVector &reference, int window,
                             const std::vector<int> &excluded_starts, int excl_width)
    {
        const CVector c = correlation_lags(received, reference);
        const int N = int(c.size());
        window = std::clamp(window, 1, N);
        std::vector<char> skip(N, 0);
        for (int d = 0; d < window; ++d)
            skip[d] = 1;
        for (int s : excluded_starts)
            for (int i = 0; i < excl_width; ++i)
                skip[((s + i) % N + N) % N] = 1;

        double in = 0.0, floor = 0.0;
        int n_floor = 0;
        for (int d = 0; d < N; ++d)
        {
            const double e = std::norm(c(d));
            if (d < window)
                in += e;
            else if (!skip[d])
            {
                floor += e;
                ++n_floor;
            }
        }
        if (n_floor > 0)
            in -= window * floor / n_floor;
        return std::max(0.0, in) / (double(N) * double(N));
    }

    int replica_lag(int root, int p, int db, int seq_length, int n_subcarriers)
    {
        const std::int64_t s = ((std::int64_t(root) * p * db) % seq_length + seq_length) % seq_length;
        const int d0 = int(std::lround(-double(s) * n_subcarriers / seq_length));
        return ((d0 % n_subcarriers) + n_subcarriers) % n_subcarriers;
    }

    InterferenceBounds interference_bounds(double chi, cd sum_vv, cd sum_vh, int seq_length, int n_e, int n_rf,
                                           bool same_root_conflict)
    {
        if (chi < 0.0)
            throw Error(ErrorCode::InvalidChi, "chi must be non-negative");
        const double c = std::sqrt(1.0 / (1.0 + chi));
        const double L = seq_length, sq = std::sqrt(L);
        InterferenceBounds b;
        b.i0 = L * c * std::abs(sum_vv);
        b.i1 = same_root_conflict ? L * c * std::abs(sum_vv) : 0.0;
        b.i2 = c * std::abs(sum_vv) * n_e * sq;
        b.i3 = c * std::abs(sum_vh) * (n_rf / 2.0) * sq;
        return b;
    }

    CorrelationReport decompose_correlation(const CMatrix &H, const CVector &w, const std::vector<CVector> &columns,
                                            const std::vector<Pol> &column_pols, const std::vector<PilotLabel> &labels,
                                            int ref, const PilotAssignment &pa)
    {
        if (columns.size() != labels.size() || columns.size() != column_pols.size())
            throw Error(ErrorCode::DimensionMismatch, "columns, polarizations and labels differ in count");
        if (ref < 0 || ref >= int(columns.size()))
            throw Error(ErrorCode::OutOfRange, "reference column out of range");
        if (H.rows() != w.size())
            throw Error(ErrorCode::DimensionMismatch, "combiner does not match the channel");

        const CVector x_ref = pa.symbols(labels[ref]);
        const CVector wH = H.adjoint() * w; // (w* H)^*
        CorrelationReport rep;
        for (std::size_t c = 0; c < columns.size(); ++c)
        {
            if (columns[c].size() != H.cols())
                throw Error(ErrorCode::DimensionMismatch, "beam does not match the channel");
            const cd gain = wH.dot(columns[c]); // w* H f
            const cd term = gain * correlate_zero_lag(pa.symbols(labels[c]), x_ref);
            rep.total += term;
            if (labels[c] == labels[ref])
                rep.i0 += term;
            else if (labels[c].root == labels[ref].root)
                rep.i1 += term;
            else if (column_pols[c] == column_pols[ref])
            {
                rep.i2 += term;
                ++rep.n_e;
            }
            else
                rep.i3 += term;
        }
        return rep;
    }

    void write_pilot_csv(std::ostream &os, const PilotAssignment &pa, const std::vector<AuxiliaryBeamPair> &abps)
    {
        os << "abp_id,axis,beam,root,b,p\n";
        for (const auto &a : abps)
        {
            const int r = a.abp_id < int(pa.abp_root.size()) ? pa.abp_root[a.abp_id] : -1;
            if (r < 0)
                continue;
            for (int b = 0; b < 2; ++b)
                os << a.abp_id << ',' << axis_name(a.axis) << ',' << a.beams[b] << ',' << r << ',' << b << ',' << pa.p << "\n";
        }
        if (!os)
            throw Error(ErrorCode::IoError, "failed writing pilot CSV");
    }
}
