#include "roadfield/geometry_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "roadfield/dispersion.hpp"
#include "roadfield/numerics.hpp"

namespace roadfield {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

struct Mapper {
    double b0, b1, a0, a1;
    double x(double beta) const { return 60.0 + (beta - b0) / (b1 - b0) * 540.0; }
    double y(double alpha) const { return 420.0 - (alpha - a0) / (a1 - a0) * 380.0; }
};

std::string polyline(const Mapper& m, const std::vector<double>& bs,
                     const std::vector<double>& as, const char* style, const char* id = nullptr) {
    std::string s = "<polyline fill=\"none\" ";
    if (id) s += std::string("id=\"") + id + "\" ";
    s += style;
    s += " points=\"";
    for (size_t i = 0; i < bs.size(); ++i) {
        s += num(m.x(bs[i])) + ',' + num(m.y(as[i]));
        if (i + 1 < bs.size()) s += ' ';
    }
    s += "\"/>\n";
    return s;
}

}  // namespace

std::string plot_geometry(const ModelParams& p, const FieldReaction& f, const RoadReaction& g,
                          double c) {
    const double fp0 = f.f_prime_0();
    const double gp0 = g.g_prime_0();
    const double ck = kpp_speed(p.d, fp0);
    if (c < ck * (1.0 - 1e-12))
        throw std::invalid_argument("plot_geometry: c must be >= c_K");
    c = std::max(c, ck);

    const double r = std::sqrt(std::max(c * c - ck * ck, 0.0)) / (2.0 * p.d);
    const bool has_slab = real_roots_exist(p, gp0, c);
    const double bl = has_slab ? beta_lower(p, gp0, c) : 0.0;

    // view window: the disc plus a stretch of the slab to its right
    const double b0 = std::min(has_slab ? std::min(bl, -r) : -r, -0.1) - 0.15 * std::max(r, 1.0);
    const double b1 = std::max({r, has_slab ? bl + std::max(3.0 * r, 1.0) : r, 0.5}) +
                      0.15 * std::max(r, 1.0);

    const int n = 400;
    std::vector<double> sb, slo, shi;  // slab sections
    if (has_slab) {
        for (int i = 0; i <= n; ++i) {
            const double beta = bl + (b1 - bl) * i / n;
            const SlabInterval iv = sigma_interval(p, gp0, c, beta);
            if (iv.empty) continue;
            sb.push_back(beta);
            slo.push_back(iv.lo);
            shi.push_back(iv.hi);
        }
    }
    std::vector<double> gb, glo, ghi;  // disc chords
    for (int i = 0; i <= n; ++i) {
        const double beta = -r + 2.0 * r * i / n;
        const SlabInterval iv = circle_interval(p, fp0, c, beta);
        if (iv.empty) continue;
        gb.push_back(beta);
        glo.push_back(iv.lo);
        ghi.push_back(iv.hi);
    }

    // overlap columns and the minimum gap (refined: tangency contact can sit
    // between samples)
    std::vector<double> ob, olo, ohi;
    double gap_min = 1e300, gap_beta = 0.0, gap_alpha = 0.0;
    if (has_slab) {
        auto gap_of = [&](double beta) {
            const SlabInterval a = sigma_interval(p, gp0, c, beta);
            const SlabInterval d = circle_interval(p, fp0, c, beta);
            if (a.empty || d.empty) return 1e300;
            return std::max(a.lo, d.lo) - std::min(a.hi, d.hi);
        };
        const double w0 = std::max(bl, -r), w1 = r;
        for (int i = 0; i <= n && w1 >= w0; ++i) {
            const double beta = w1 > w0 ? w0 + (w1 - w0) * i / n : w0;
            const SlabInterval a = sigma_interval(p, gp0, c, beta);
            const SlabInterval d = circle_interval(p, fp0, c, beta);
            if (a.empty || d.empty) continue;
            const double lo = std::max(a.lo, d.lo);
            const double hi = std::min(a.hi, d.hi);
            if (lo - hi < gap_min) {
                gap_min = lo - hi;
                gap_beta = beta;
                gap_alpha = 0.5 * (lo + hi);
            }
            if (lo <= hi) {
                ob.push_back(beta);
                olo.push_back(lo);
                ohi.push_back(hi);
            }
            if (w1 == w0) break;
        }
        if (gap_min < 1e300 && w1 > w0) {
            const double h = (w1 - w0) / n;
            const double a = std::max(w0, gap_beta - h);
            const double b = std::min(w1, gap_beta + h);
            const double refined = golden_min(a, b, 1e-12 * (w1 - w0), gap_of);
            if (gap_of(refined) < gap_min) {
                gap_beta = refined;
                gap_min = gap_of(refined);
                const SlabInterval sa = sigma_interval(p, gp0, c, refined);
                const SlabInterval sd = circle_interval(p, fp0, c, refined);
                gap_alpha = 0.5 * (std::max(sa.lo, sd.lo) + std::min(sa.hi, sd.hi));
            }
        }
    }

    double a0 = 0.0, a1 = c / p.d;  // always spans the disc
    for (double v : shi) a1 = std::max(a1, v);
    for (double v : slo) a0 = std::min(a0, v);
    a0 -= 0.08 * (a1 - a0);
    a1 += 0.08 * (a1 - a0);
    const Mapper m{b0, b1, a0, a1};

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"660\" height=\"470\" "
           "viewBox=\"0 0 660 470\">\n";
    svg += "<rect width=\"660\" height=\"470\" fill=\"white\"/>\n";

    // axes with a few ticks
    if (a0 <= 0.0 && a1 >= 0.0)
        svg += "<line x1=\"" + num(m.x(b0)) + "\" y1=\"" + num(m.y(0)) + "\" x2=\"" +
               num(m.x(b1)) + "\" y2=\"" + num(m.y(0)) + "\" stroke=\"#999\"/>\n";
    if (b0 <= 0.0 && b1 >= 0.0)
        svg += "<line x1=\"" + num(m.x(0)) + "\" y1=\"" + num(m.y(a0)) + "\" x2=\"" +
               num(m.x(0)) + "\" y2=\"" + num(m.y(a1)) + "\" stroke=\"#999\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double beta = b0 + (b1 - b0) * k / 4;
        const double alpha = a0 + (a1 - a0) * k / 4;
        svg += "<text x=\"" + num(m.x(beta)) + "\" y=\"445\" font-size=\"11\" "
               "text-anchor=\"middle\">" + num(beta) + "</text>\n";
        svg += "<text x=\"12\" y=\"" + num(m.y(alpha)) + "\" font-size=\"11\">" + num(alpha) +
               "</text>\n";
    }

    if (!ob.empty()) {
        std::string pts;
        for (size_t i = 0; i < ob.size(); ++i)
            pts += num(m.x(ob[i])) + ',' + num(m.y(olo[i])) + ' ';
        for (size_t i = ob.size(); i-- > 0;)
            pts += num(m.x(ob[i])) + ',' + num(m.y(ohi[i])) + (i ? " " : "");
        svg += "<polygon id=\"overlap\" fill=\"#ff7f0e\" fill-opacity=\"0.45\" "
               "stroke=\"none\" points=\"" + pts + "\"/>\n";
    }
    if (!sb.empty()) {
        svg += polyline(m, sb, shi, "stroke=\"#1f77b4\" stroke-width=\"1.6\"", "sigma-plus");
        svg += polyline(m, sb, slo,
                        "stroke=\"#1f77b4\" stroke-width=\"1.6\" stroke-dasharray=\"6 3\"",
                        "sigma-minus");
    }
    if (!gb.empty()) {
        std::vector<double> cb = gb, ca = ghi;
        for (size_t i = gb.size(); i-- > 0;) {
            cb.push_back(gb[i]);
            ca.push_back(glo[i]);
        }
        cb.push_back(gb.front());
        ca.push_back(ghi.front());
        svg += polyline(m, cb, ca, "stroke=\"#333\" stroke-width=\"1.6\"", "gamma");
    }
    if (gap_min < 1e300 && std::abs(gap_min) <= 1e-6) {
        svg += "<circle id=\"contact\" cx=\"" + num(m.x(gap_beta)) + "\" cy=\"" +
               num(m.y(gap_alpha)) + "\" r=\"4\" fill=\"#d62728\"/>\n";
    }

    char title[256];
    std::snprintf(title, sizeof(title),
                  "c = %.6g, c_K = %.6g  (d=%.4g, D=%.4g, mu=%.4g, nu=%.4g, q=%.4g, "
                  "f'0=%.4g, g'0=%.4g)",
                  c, ck, p.d, p.D, p.mu, p.nu, p.q, fp0, gp0);
    svg += std::string("<text x=\"60\" y=\"22\" font-size=\"13\">") + title + "</text>\n";
    svg += "<text x=\"60\" y=\"38\" font-size=\"11\" fill=\"#555\">slab between dashed and "
           "solid blue; disc boundary black; exponent weight gamma = mu/(nu + d beta)</text>\n";
    svg += "<text x=\"620\" y=\"445\" font-size=\"12\">beta</text>\n";
    svg += "<text x=\"30\" y=\"55\" font-size=\"12\">alpha</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace roadfield
