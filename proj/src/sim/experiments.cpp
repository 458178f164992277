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

#include "abp/sim/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

namespace abp::sim
{
    std::uint64_t trial_seed(std::uint64_t master, int trial, Stream s, std::uint64_t sub)
    {
        return derive_seed(master, std::uint64_t(trial), std::uint64_t(s), sub);
    }

    void for_each_trial(int trials, int threads, const std::function<void(int)> &fn)
    {
        threads = std::clamp(threads, 1, std::max(1, trials));
        if (threads == 1)
        {
            for (int t = 0; t < trials; ++t)
                fn(t);
            return;
        }
        std::atomic<int> next{0};
        std::exception_ptr err;
        std::mutex mu;
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&]
                              {
                                  for (int t = next++; t < trials; t = next++)
                                  {
                                      try
                                      {
                                          fn(t);
                                      }
                                      catch (...)
                                      {
                                          std::lock_guard<std::mutex> lock(mu);
                                          if (!err)
                                              err = std::current_exception();
                                          next = trials;
                                      }
                                  } });
        for (auto &th : pool)
            th.join();
        if (err)
            std::rethrow_exception(err);
    }

    namespace
    {
        EstimatorOptions estimator_options(const ExperimentConfig &cfg)
        {
            EstimatorOptions o;
            o.inversion = cfg.inversion;
            o.window = cfg.window;
            return o;
        }

        Table metric_table()
        {
            Table t;
            t.name = "metrics";
            t.header = {"experiment", "snr_db", "scheme", "metric", "value", "ci95"};
            return t;
        }

        void add_metric(RunResult &r, const std::string &exp, const std::string &snr, const std::string &scheme,
                        const std::string &metric, const Summary &s)
        {
            r.metrics.add_row({exp, snr, scheme, metric, fmt(s.mean), fmt(s.ci95)});
        }

        Summary column_summary(const std::vector<std::vector<double>> &per_trial, std::size_t idx)
        {
            std::vector<double> v;
            v.reserve(per_trial.size());
            for (const auto &row : per_trial)
                v.push_back(row[idx]);
            return summarize(v);
        }

        std::vector<int> root_pool(const ExperimentConfig &cfg, int seq_length)
        {
            std::vector<int> pool;
            std::set<int> seen;
            for (int r : cfg.roots)
                if (r > 0 && std::gcd(r, seq_length) == 1 && seen.insert(r).second)
                    pool.push_back(r);
            for (int r : default_root_pool(seq_length, std::min(seq_length - 1, 96)))
                if (seen.insert(r).second)
                    pool.push_back(r);
            return pool;
        }

        ClusterProfile cluster_profile(const ExperimentConfig &cfg)
        {
            ClusterProfile p = cfg.cluster;
            p.sectors = cfg.sectors;
            return p;
        }

        double err_deg(double a, double b, bool wrap)
        {
            return rad2deg(std::abs(wrap ? wrap_angle(a - b) : a - b));
        }

        // azimuth AoD, elevation AoD, AoA
        std::array<double, 3> angle_errors(const AngleSet &truth, const AngleSet &est)
        {
            return {err_deg(truth.phi, est.phi, true), err_deg(truth.theta, est.theta, false),
                    err_deg(truth.psi, est.psi, false)};
        }

        // ---------------------------------------------------------------- MAEE

        RunResult run_maee(const ExperimentConfig &cfg)
        {
            const std::vector<std::string> schemes{"abp", "abp_feedback", "gob"};
            // spatial-frequency domains in degrees first, then physical angles
            const std::vector<std::string> domains{"azimuth_aod", "elevation_aod", "aoa", "azimuth_angle", "elevation_angle", "aoa_angle"};
            constexpr std::size_t D = 6, K = 3 * D;
            const Codebooks cb = build_codebooks(cfg.arrays, cfg.sectors);
            const auto opt = estimator_options(cfg);
            const std::size_t S = cfg.snr_db.size();

            // per trial: snr-major, then scheme, then domain
            std::vector<std::vector<double>> res(cfg.trials, std::vector<double>(S * K));
            for_each_trial(cfg.trials, cfg.threads, [&](int t)
                           {
                               const auto ch = rician_narrowband(cfg.k_factor_db, cfg.n_nlos,
                                                                 trial_seed(cfg.seed, t, Stream::channel), cfg.arrays,
                                                                 std::nullopt, cfg.sectors, cfg.gain_scale());
                               const AngleSet truth = ch.paths[0].angles;
                               const SpatialFrequencies tsf = spatial_frequencies(truth, cfg.arrays);
                               for (std::size_t i = 0; i < S; ++i)
                               {
                                   std::mt19937_64 rng(trial_seed(cfg.seed, t, Stream::noise, i));
                                   const auto P = measure_power_grid(ch, cb, snr_from_db(cfg.snr_db[i]), rng);
                                   const auto abp = estimate_single_path(P, cb, opt).paths[0];
                                   const auto gob = gob_estimate(P, cb).paths[0];

                                   const double qx = reconstruct(quantize_differential(abp.mu.mu_x, abp.el.center, abp.el.delta, cfg.quant_bits, cfg.variant), abp.el.center);
                                   const double qy = reconstruct(quantize_differential(abp.mu.mu_y, abp.az.center, abp.az.delta, cfg.quant_bits, cfg.variant), abp.az.center);
                                   const SpatialFrequencies fsf{qx, qy, abp.mu.nu};
                                   const AngleSet fb = angles_from(fsf, cfg.arrays);

                                   const std::array<SpatialFrequencies, 3> esf{abp.mu, fsf, gob.mu};
                                   const std::array<AngleSet, 3> est{abp.angles, fb, gob.angles};
                                   for (std::size_t s = 0; s < 3; ++s)
                                   {
                                       double *o = &res[t][i * K + s * D];
                                       o[0] = err_deg(tsf.mu_y, esf[s].mu_y, false);
                                       o[1] = err_deg(tsf.mu_x, esf[s].mu_x, false);
                                       o[2] = err_deg(tsf.nu, esf[s].nu, false);
                                       const auto e = angle_errors(truth, est[s]);
                                       for (std::size_t d = 0; d < 3; ++d)
                                           o[3 + d] = e[d];
                                   }
                               } });

            RunResult r;
            r.metrics = metric_table();
            Table tab;
            tab.name = "maee_vs_snr";
            tab.header = {"snr_db", "scheme", "domain", "maee_deg", "ci95"};
            std::vector<Series> series(K);
            for (std::size_t i = 0; i < S; ++i)
                for (std::size_t s = 0; s < 3; ++s)
                    for (std::size_t d = 0; d < D; ++d)
                    {
                        const Summary sm = column_summary(res, i * K + s * D + d);
                        tab.add_row({fmt(cfg.snr_db[i]), schemes[s], domains[d], fmt(sm.mean), fmt(sm.ci95)});
                        add_metric(r, "maee_vs_snr", fmt(cfg.snr_db[i]), schemes[s], "maee_" + domains[d] + "_deg", sm);
                        auto &se = series[s * D + d];
                        se.label = schemes[s] + " " + domains[d];
                        se.x.push_back(cfg.snr_db[i]);
                        se.y.push_back(sm.mean);
                    }
            r.tables.push_back(tab);
            r.plots.push_back({"maee_vs_snr", {"Mean angle estimation error", "SNR (dB)", "MAEE (deg)", series, true}});
            return r;
        }

        // ---------------------------------------------------------------- MAQE

        RunResult run_maqe(const ExperimentConfig &cfg)
        {
            const auto opt = estimator_options(cfg);
            const double gamma = snr_from_db(cfg.snr_db.front());
            const std::size_t A = cfg.n_y_sweep.size(), B = cfg.quant_bits_sweep.size();
            const double half_sector = 0.5 * cfg.sectors.azimuth;

            std::vector<Codebooks> cbs;
            std::vector<ArrayConfig> arrs;
            for (int ny : cfg.n_y_sweep)
            {
                ArrayConfig a = cfg.arrays;
                a.n_y = ny;
                arrs.push_back(a);
                cbs.push_back(build_codebooks(a, cfg.sectors));
            }

            // per trial: n_y, bits, scheme (differential, direct)
            std::vector<std::vector<double>> res(cfg.trials, std::vector<double>(A * B * 2));
            for_each_trial(cfg.trials, cfg.threads, [&](int t)
                           {
                               for (std::size_t a = 0; a < A; ++a)
                               {
                                   const double gs = cfg.normalization == GainNormalization::array_gain ? array_gain_scale(arrs[a]) : 1.0;
                                   const auto ch = rician_narrowband(cfg.k_factor_db, cfg.n_nlos, trial_seed(cfg.seed, t, Stream::channel, a),
                                                                     arrs[a], std::nullopt, cfg.sectors, gs);
                                   std::mt19937_64 rng(trial_seed(cfg.seed, t, Stream::noise, a));
                                   const auto est = estimate_single_path(ch, cbs[a], gamma, rng, opt).paths[0];
                                   const double mu = est.mu.mu_y;
                                   for (std::size_t b = 0; b < B; ++b)
                                   {
                                       const int total = cfg.quant_bits_sweep[b];
                                       const double qd = reconstruct(quantize_differential(mu, est.az.center, est.az.delta, total - 1, cfg.variant), est.az.center);
                                       const double qr = reconstruct(quantize_direct(std::clamp(mu, -half_sector, half_sector), cfg.sectors.azimuth, total));
                                       res[t][(a * B + b) * 2 + 0] = rad2deg(std::abs(mu - qd));
                                       res[t][(a * B + b) * 2 + 1] = rad2deg(std::abs(mu - qr));
                                   }
                               } });

            RunResult r;
            r.metrics = metric_table();
            Table tab;
            tab.name = "maqe_bits";
            tab.header = {"n_y", "total_bits", "scheme", "delta_y_deg", "maqe_deg", "ci95"};
            std::vector<Series> series;
            const char *names[2] = {"differential", "direct"};
            for (std::size_t a = 0; a < A; ++a)
                for (int s = 0; s < 2; ++s)
                {
                    Series se;
                    se.label = std::string(names[s]) + " N_y=" + std::to_string(cfg.n_y_sweep[a]);
                    for (std::size_t b = 0; b < B; ++b)
                    {
                        const Summary sm = column_summary(res, (a * B + b) * 2 + s);
                        tab.add_row({std::to_string(cfg.n_y_sweep[a]), std::to_string(cfg.quant_bits_sweep[b]), names[s],
                                     fmt(rad2deg(cbs[a].deltas.delta_y)), fmt(sm.mean), fmt(sm.ci95)});
                        add_metric(r, "maqe_bits", fmt(cfg.snr_db.front()), names[s],
                                   "maqe_deg_ny" + std::to_string(cfg.n_y_sweep[a]) + "_bits" + std::to_string(cfg.quant_bits_sweep[b]), sm);
                        se.x.push_back(cfg.quant_bits_sweep[b]);
                        se.y.push_back(sm.mean);
                    }
                    series.push_back(se);
                }
            r.tables.push_back(tab);
            r.plots.push_back({"maqe_bits", {"Mean angle quantization error", "Feedback bits", "MAQE (deg)", series, true}});
            return r;
        }

        // ---------------------------------------------------------------- pilots

        // Beam labels of the four-beam example: first root with b = 0 and 1, then one beam per further root
        std::vector<PilotLabel> example_labels(const std::vector<int> &roots)
        {
            std::vector<PilotLabel> l{{roots[0], 0}, {roots[0], 1}};
            for (std::size_t i = 1; i < roots.size(); ++i)
                l.push_back({roots[i], int((i - 1) % 2)});
            return l;
        }

        RunResult run_pilot_correlation(const ExperimentConfig &cfg)
        {
            const int N = cfg.ofdm.n_subcarriers;
            const int L = pilot_sequence_length(N, cfg.pilot_layout);
            const auto labels = example_labels(cfg.roots);
            const int p = select_shift(cfg.roots, L, cfg.shift_p);
            const PilotLabel ref = labels[1];
            const CVector x_ref = pilot_symbols(ref.root, ref.b, p, N, cfg.pilot_layout);

            RunResult r;
            r.metrics = metric_table();
            Table tab;
            tab.name = "pilot_correlation";
            tab.header = {"beam", "root", "b", "ref_root", "ref_b", "p", "seq_length", "correlation"};
            Series se{"|correlation|", {}, {}};
            for (std::size_t i = 0; i < labels.size(); ++i)
            {
                const CVector x = pilot_symbols(labels[i].root, labels[i].b, p, N, cfg.pilot_layout);
                const double c = std::abs(correlate_zero_lag(x, x_ref)) / x_ref.squaredNorm();
                tab.add_row({std::to_string(i + 1), std::to_string(labels[i].root), std::to_string(labels[i].b),
                             std::to_string(ref.root), std::to_string(ref.b), std::to_string(p), std::to_string(L), fmt(c)});
                add_metric(r, "pilot_correlation", "inf", "multi_layer_pilot", "correlation_beam" + std::to_string(i + 1), {c, 0.0, 1});
                se.x.push_back(double(i + 1));
                se.y.push_back(c);
            }
            r.tables.push_back(tab);
            r.plots.push_back({"pilot_correlation", {"Zero-lag correlation against the reference pilot", "Beam", "Absolute correlation", {se}, false}});
            return r;
        }

        RunResult run_pilot_vs_tdm(const ExperimentConfig &cfg)
        {
            const Codebooks cb = build_codebooks(cfg.arrays, cfg.sectors);
            const auto opt = estimator_options(cfg);
            const int N = cfg.ofdm.n_subcarriers;
            const auto labels = example_labels(cfg.roots);
            constexpr int n_beams = 4;

            PilotAssignment pa;
            pa.n_subcarriers = N;
            pa.seq_length = pilot_sequence_length(N, cfg.pilot_layout);
            pa.layout = cfg.pilot_layout;
            pa.p = select_shift(cfg.roots, pa.seq_length, cfg.shift_p);
            pa.beam_labels.assign(cb.tx.size(), labels[0]);

            const auto v_ids = cb.tx_ids(Pol::v), h_ids = cb.tx_ids(Pol::h), rv_ids = cb.rx_ids(Pol::v);
            const double gamma = snr_from_db(cfg.snr_db.front());
            const ClusterProfile prof = cluster_profile(cfg);

            // per trial: pilot strengths then TDM strengths
            std::vector<std::vector<double>> res(cfg.trials, std::vector<double>(2 * n_beams));
            for_each_trial(cfg.trials, cfg.threads, [&](int t)
                           {
                               const auto ch = clustered_channel_generate(prof, trial_seed(cfg.seed, t, Stream::channel), cfg.arrays, cfg.ofdm, cfg.gain_scale());
                               std::mt19937_64 sel(trial_seed(cfg.seed, t, Stream::selection));
                               std::vector<int> v = v_ids;
                               std::shuffle(v.begin(), v.end(), sel);
                               std::vector<int> beams{v[0], v[1], v[2]};
                               beams.push_back(h_ids[std::uniform_int_distribution<std::size_t>(0, h_ids.size() - 1)(sel)]);
                               const int j = rv_ids[std::uniform_int_distribution<std::size_t>(0, rv_ids.size() - 1)(sel)];

                               PilotAssignment local = pa;
                               for (int i = 0; i < n_beams; ++i)
                                   local.beam_labels[beams[i]] = labels[i];
                               ProbingPlan plan;
                               plan.tx = {beams};
                               plan.rx = {{j}};
                               plan.n_rf = n_beams;
                               plan.m_rf = 1;

                               std::mt19937_64 rng(trial_seed(cfg.seed, t, Stream::noise));
                               const auto map = measure_pilot_strengths(ch, cb, plan, local, gamma, rng, opt);
                               for (int i = 0; i < n_beams; ++i)
                               {
                                   res[t][i] = map.strength(j, beams[i]);
                                   double tdm = 0.0;
                                   for (int k = 0; k < N; ++k)
                                       tdm += std::norm(cb.rx[j].vector.dot(ch.H[k] * cb.tx[beams[i]].vector));
                                   res[t][n_beams + i] = tdm / N;
                               } });

            RunResult r;
            r.metrics = metric_table();
            Table tab;
            tab.name = "pilot_vs_tdm";
            tab.header = {"beam", "pol", "root", "b", "pilot_strength", "pilot_ci95", "tdm_strength", "tdm_ci95", "relative_difference"};
            Series sp{"multi-layer pilot", {}, {}}, st{"TDM", {}, {}};
            for (int i = 0; i < n_beams; ++i)
            {
                const Summary p = column_summary(res, i), q = column_summary(res, n_beams + i);
                const double rel = q.mean > 0.0 ? (p.mean - q.mean) / q.mean : 0.0;
                tab.add_row({std::to_string(i + 1), i < 3 ? "v" : "h", std::to_string(labels[i].root), std::to_string(labels[i].b),
                             fmt(p.mean), fmt(p.ci95), fmt(q.mean), fmt(q.ci95), fmt(rel)});
                const std::string snr = fmt(cfg.snr_db.front());
                add_metric(r, "pilot_vs_tdm", snr, "pilot", "strength_beam" + std::to_string(i + 1), p);
                add_metric(r, "pilot_vs_tdm", snr, "tdm", "strength_beam" + std::to_string(i + 1), q);
                sp.x.push_back(i + 1);
                sp.y.push_back(p.mean);
                st.x.push_back(i + 1);
                st.y.push_back(q.mean);
            }
            r.tables.push_back(tab);
            r.plots.push_back({"pilot_vs_tdm", {"Average received strength per beam", "Beam", "Strength", {sp, st}, false}});
            return r;
        }

        // ---------------------------------------------------------------- spectral efficiency

        struct SeSetup
        {
            Codebooks cb;
            PilotAssignment pilots;
        };

        SeSetup se_setup(const ExperimentConfig &cfg)
        {
            SeSetup s{build_codebooks(cfg.arrays, cfg.sectors), {}};
            const auto abps = enumerate_abps(s.cb);
            const int L = pilot_sequence_length(cfg.ofdm.n_subcarriers, cfg.pilot_layout);
            s.pilots = assign_beam_pilots(s.cb, abps, cfg.ofdm.n_subcarriers, root_pool(cfg, L), cfg.shift_p, cfg.pilot_layout);
            return s;
        }

        struct SeTriple
        {
            double perfect, abp, gob;
        };

        // Conventional spectral efficiency of perfect, ABP and GoB beamforming for one channel
        SeTriple se_once(const ExperimentConfig &cfg, const SeSetup &su, const ChannelRealization &ch, int n_s, int n_tx,
                         int m_rx, double snr_db, int t, std::uint64_t sub, bool with_gob)
        {
            const double gamma = snr_from_db(snr_db);
            const auto opt = estimator_options(cfg);
            const ProbingPlan plan = random_probing_plan(su.cb, n_tx, m_rx, n_s, n_s, trial_seed(cfg.seed, t, Stream::probing, sub));
            std::mt19937_64 rng(trial_seed(cfg.seed, t, Stream::noise, sub));

            SeTriple out{};
            const Beamformers perfect = beamformers_from_truth(su.cb, ch, n_s);
            out.perfect = spectral_efficiency(ch, perfect.F, perfect.W, gamma, n_s);
            const auto abp = estimate_multipath(ch, su.cb, plan, su.pilots, gamma, n_s, rng, opt);
            const Beamformers fa = beamformers_from_estimates(su.cb, abp, n_s);
            out.abp = spectral_efficiency(ch, fa.F, fa.W, gamma, n_s);
            if (with_gob)
            {
                const auto gob = gob_multipath(ch, su.cb, gamma, n_s, rng);
                const Beamformers fg = beamformers_from_estimates(su.cb, gob, n_s);
                out.gob = spectral_efficiency(ch, fg.F, fg.W, gamma, n_s);
            }
            return out;
        }

        RunResult run_norm_se(const ExperimentConfig &cfg)
        {
            const SeSetup su = se_setup(cfg);
            const ClusterProfile prof = cluster_profile(cfg);
            const std::size_t S = cfg.snr_db.size(), C = cfg.n_s.size();

            // per trial: snr, case, scheme (perfect, abp, gob)
            std::vector<std::vector<double>> res(cfg.trials, std::vector<double>(S * C * 3));
            for_each_trial(cfg.trials, cfg.threads, [&](int t)
                           {
                               const auto ch = clustered_channel_generate(prof, trial_seed(cfg.seed, t, Stream::channel), cfg.arrays, cfg.ofdm, cfg.gain_scale());
                               for (std::size_t i = 0; i < S; ++i)
                                   for (std::size_t c = 0; c < C; ++c)
                                   {
                                       const auto v = se_once(cfg, su, ch, cfg.n_s[c], cfg.n_tx[c], cfg.m_rx[c], cfg.snr_db[i], t, i * 64 + c, true);
                                       double *o = &res[t][(i * C + c) * 3];
                                       o[0] = v.perfect;
                                       o[1] = v.abp;
                                       o[2] = v.gob;
                                   } });

            RunResult r;
            r.metrics = metric_table();
            Table tab;
            tab.name = "norm_se_vs_snr";
            tab.header = {"snr_db", "n_s", "scheme", "t_est", "se", "se_ci95", "normalized_se", "normalized_ci95"};
            const char *names[3] = {"perfect", "abp", "gob"};
            std::vector<Series> series;
            for (std::size_t c = 0; c < C; ++c)
            {
                const int ns = cfg.n_s[c];
                const std::int64_t iters[3] = {0, abp_complexity(ns, cfg.n_tx[c], ns, cfg.m_rx[c]), gob_complexity(cfg.n_bm, cfg.m_bm, ns, ns)};
                for (int s = 0; s < 3; ++s)
                {
                    Series se;
                    se.label = std::string(names[s]) + " N_S=" + std::to_string(ns);
                    const int t_est = estimation_slots(iters[s], cfg.overhead);
                    for (std::size_t i = 0; i < S; ++i)
                    {
                        const std::size_t idx = (i * C + c) * 3 + s;
                        std::vector<double> raw, norm;
                        for (const auto &row : res)
                        {
                            raw.push_back(row[idx]);
                            norm.push_back(normalized_spectral_efficiency(row[idx], iters[s], cfg.overhead));
                        }
                        const Summary a = summarize(raw), b = summarize(norm);
                        tab.add_row({fmt(cfg.snr_db[i]), std::to_string(ns), names[s], std::to_string(t_est), fmt(a.mean), fmt(a.ci95), fmt(b.mean), fmt(b.ci95)});
                        add_metric(r, "norm_se_vs_snr", fmt(cfg.snr_db[i]), names[s], "normalized_se_ns" + std::to_string(ns), b);
                        add_metric(r, "norm_se_vs_snr", fmt(cfg.snr_db[i]), names[s], "se_ns" + std::to_string(ns), a);
                        se.x.push_back(cfg.snr_db[i]);
                        se.y.push_back(b.mean);
                    }
                    series.push_back(se);
                }
            }
            r.tables.push_back(tab);
            r.plots.push_back({"norm_se_vs_snr", {"Normalized spectral efficiency", "SNR (dB)", "bits/s/Hz", series, false}});
            return r;
        }

        RunResult run_robustness(const ExperimentConfig &cfg, bool mismatch)
        {
            const SeSetup su = se_setup(cfg);
            const std::size_t S = cfg.snr_db.size(), V = cfg.sweep.size();
            const std::string param = mismatch ? "varsigma_deg" : "chi";
            const int ns = cfg.n_s.front(), ntx = cfg.n_tx.front(), mrx = cfg.m_rx.front();

            // per trial: sweep value, snr, scheme (perfect, abp)
            std::vector<std::vector<double>> res(cfg.trials, std::vector<double>(V * S * 2));
            for_each_trial(cfg.trials, cfg.threads, [&](int t)
                           {
                               for (std::size_t v = 0; v < V; ++v)
                               {
                                   ClusterProfile prof = cluster_profile(cfg);
                                   if (mismatch)
                                       prof.xp.varsigma = deg2rad(cfg.sweep[v]);
                                   else
                                       prof.xp.chi = cfg.sweep[v];
                                   // same draws for every sweep value
                                   const auto ch = clustered_channel_generate(prof, trial_seed(cfg.seed, t, Stream::channel), cfg.arrays, cfg.ofdm, cfg.gain_scale());
                                   for (std::size_t i = 0; i < S; ++i)
                                   {
                                       const auto o = se_once(cfg, su, ch, ns, ntx, mrx, cfg.snr_db[i], t, i, false);
                                       res[t][(v * S + i) * 2 + 0] = o.perfect;
                                       res[t][(v * S + i) * 2 + 1] = o.abp;
                                   }
                               } });

            RunResult r;
            r.metrics = metric_table();
            Table tab, gap;
            tab.name = cfg.experiment;
            tab.header = {"parameter", "value", "snr_db", "scheme", "se", "ci95"};
            gap.name = cfg.experiment + "_gap";
            gap.header = {"parameter", "value", "mean_relative_gap"};
            const char *names[2] = {"perfect", "abp"};
            std::vector<Series> series;
            for (std::size_t i = 0; i < S; ++i)
                for (int s = 0; s < 2; ++s)
                    series.push_back({std::string(names[s]) + " " + fmt(cfg.snr_db[i]) + " dB", {}, {}});
            for (std::size_t v = 0; v < V; ++v)
            {
                double gsum = 0.0;
                for (std::size_t i = 0; i < S; ++i)
                {
                    Summary sm[2];
                    for (int s = 0; s < 2; ++s)
                    {
                        sm[s] = column_summary(res, (v * S + i) * 2 + s);
                        tab.add_row({param, fmt(cfg.sweep[v]), fmt(cfg.snr_db[i]), names[s], fmt(sm[s].mean), fmt(sm[s].ci95)});
                        add_metric(r, cfg.experiment, fmt(cfg.snr_db[i]), names[s], "se_" + param + "_" + fmt(cfg.sweep[v]), sm[s]);
                        series[i * 2 + s].x.push_back(cfg.sweep[v]);
                        series[i * 2 + s].y.push_back(sm[s].mean);
                    }
                    gsum += sm[0].mean > 0.0 ? (sm[0].mean - sm[1].mean) / sm[0].mean : 0.0;
                }
                gap.add_row({param, fmt(cfg.sweep[v]), fmt(gsum / double(S))});
            }
            r.tables.push_back(tab);
            r.tables.push_back(gap);
            r.plots.push_back({cfg.experiment, {mismatch ? "Spectral efficiency vs mismatch angle" : "Spectral efficiency vs power imbalance",
                                                mismatch ? "varsigma (deg)" : "chi", "bits/s/Hz", series, false}});
            return r;
        }
    }

    RunResult run_experiment(const ExperimentConfig &cfg)
    {
        cfg.validate();
        const std::string &e = cfg.experiment;
        if (e == "maee_vs_snr")
            return run_maee(cfg);
        if (e == "maqe_bits")
            return run_maqe(cfg);
        if (e == "pilot_correlation")
            return run_pilot_correlation(cfg);
        if (e == "pilot_vs_tdm")
            return run_pilot_vs_tdm(cfg);
        if (e == "norm_se_vs_snr")
            return run_norm_se(cfg);
        if (e == "robustness_mismatch")
            return run_robustness(cfg, true);
        return run_robustness(cfg, false);
    }

    namespace
    {
        void write_file(const std::filesystem::path &p, const std::string &content)
        {
            std::ofstream os(p, std::ios::binary);
            if (!os)
                throw Error(ErrorCode::IoError, "cannot open '" + p.string() + "' for writing");
            os << content;
            os.close();
            if (!os)
                throw Error(ErrorCode::IoError, "failed writing '" + p.string() + "'");
        }
    }

    std::vector<std::string> emit_outputs(const RunResult &result, const std::string &out_dir, bool plots)
    {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec || !fs::is_directory(out_dir))
            throw Error(ErrorCode::IoError, "cannot create output directory '" + out_dir + "'");

        std::vector<std::string> written;
        auto emit_table = [&](const Table &t)
        {
            if (t.rows.empty())
                throw Error(ErrorCode::EmptyInput, "table '" + t.name + "' has no rows");
            const fs::path p = fs::path(out_dir) / (t.name + ".csv");
            write_file(p, to_csv(t));
            written.push_back(p.string());
        };
        for (const auto &t : result.tables)
            emit_table(t);
        emit_table(result.metrics);
        if (plots)
            for (const auto &pl : result.plots)
            {
                const fs::path p = fs::path(out_dir) / (pl.name + ".svg");
                write_file(p, render_svg(pl.spec));
                written.push_back(p.string());
            }
        return written;
    }
}
