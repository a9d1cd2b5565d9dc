#include "roadfield/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "roadfield/csv.hpp"
#include "roadfield/dispersion.hpp"

namespace roadfield {

std::vector<SweepPoint> sweep_points(const RunConfig& c) {
    const std::vector<double> Ds = c.sweep_D ? c.sweep_D->values() : std::vector<double>{c.D};
    const std::vector<double> qs = c.sweep_q ? c.sweep_q->values() : std::vector<double>{c.q};
    std::vector<double> rhos{0.0};
    const bool use_rho = c.sweep_rho.has_value();
    if (use_rho) rhos = c.sweep_rho->values();

    std::vector<SweepPoint> pts;
    pts.reserve(Ds.size() * qs.size() * rhos.size());
    for (double D : Ds)
        for (double q : qs)
            for (double rho : rhos) pts.push_back({D, q, rho, use_rho});
    return pts;
}

std::string sweep_csv(const RunConfig& c, int workers, double tol) {
    const std::vector<SweepPoint> pts = sweep_points(c);
    const FieldReaction f = c.make_field();
    const RoadReaction base_road = c.make_road();

    std::vector<std::string> rows(pts.size());
    std::atomic<size_t> cursor{0};
    auto work = [&] {
        for (size_t i; (i = cursor.fetch_add(1)) < pts.size();) {
            const SweepPoint& pt = pts[i];
            const ModelParams params(c.d, pt.D, c.mu, c.nu, pt.q);
            const RoadReaction road =
                pt.use_rho ? RoadReaction::mortality(pt.rho) : base_road;
            const CriticalSpeed cs = critical_speed(params, f, road, c.direction, tol);
            rows[i] =
                speed_csv_row(params, f.f_prime_0(), road.g_prime_0(), c.direction, cs);
        }
    };

    int n = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (!pts.empty() && static_cast<size_t>(n) > pts.size()) n = static_cast<int>(pts.size());
    if (n <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n - 1);
        for (int t = 1; t < n; ++t) pool.emplace_back(work);
        work();
        for (auto& th : pool) th.join();
    }

    std::string out = speed_csv_header();
    out += '\n';
    for (const auto& r : rows) {
        out += r;
        out += '\n';
    }
    return out;
}

std::string thresholds_csv(const RunConfig& c) {
    const std::vector<SweepPoint> pts = sweep_points(c);
    const FieldReaction f = c.make_field();
    const RoadReaction base_road = c.make_road();

    std::string out = "d,D,mu,nu,q,fp0,gp0,direction,ratio,threshold_rhs,predicted_at_ck\n";
    for (const SweepPoint& pt : pts) {
        const ModelParams params(c.d, pt.D, c.mu, c.nu, pt.q);
        const RoadReaction road = pt.use_rho ? RoadReaction::mortality(pt.rho) : base_road;
        const double fp0 = f.f_prime_0();
        const double gp0 = road.g_prime_0();
        const double qe = params.q_toward(c.direction);
        const double rhs = 2.0 - gp0 / fp0 - qe / std::sqrt(params.d * fp0);
        const bool at_ck = threshold_predicts_ck(params, fp0, gp0, c.direction);
        out += csv_num(params.d) + ',' + csv_num(params.D) + ',' + csv_num(params.mu) + ',' +
               csv_num(params.nu) + ',' + csv_num(params.q) + ',' + csv_num(fp0) + ',' +
               csv_num(gp0) + ',' + std::to_string(c.direction) + ',' +
               csv_num(params.D / params.d) + ',' + csv_num(rhs) + ',' +
               (at_ck ? "true" : "false") + '\n';
    }
    return out;
}

}  // namespace roadfield
