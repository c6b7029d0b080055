#include "snailbudget/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "snailbudget/dynamics.hpp"

namespace snailbudget {

std::vector<double> log_space(double lo, double hi, int count) {
  if (!(lo > 0 && hi > lo) || count < 1)
    throw std::invalid_argument("log_space: bad range");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    out[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
  return out;
}

std::vector<double> default_eta_axis(int count) {
  return log_space(0.05, 4.0, count);
}

std::vector<double> default_delta_axis(int count) {
  return log_space(10e6, 1e9, count);
}

FidelityGrid fidelity_grid(const Config& config,
                           const std::vector<double>& eta_axis,
                           const std::vector<double>& delta_axis_hz) {
  auto check_axis = [](const std::vector<double>& a, const char* name) {
    if (a.empty()) throw std::invalid_argument(std::string(name) + ": empty");
    for (size_t i = 0; i < a.size(); ++i) {
      if (!(a[i] > 0))
        throw std::invalid_argument(std::string(name) + ": must be positive");
      if (i && !(a[i - 1] < a[i]))
        throw std::invalid_argument(std::string(name) + ": must be sorted");
    }
  };
  check_axis(eta_axis, "eta_axis");
  check_axis(delta_axis_hz, "delta_axis");

  FidelityGrid grid;
  grid.eta_axis = eta_axis;
  grid.delta_axis_hz = delta_axis_hz;
  grid.threshold = config.gate.target_fidelity;
  const size_t ne = eta_axis.size(), nd = delta_axis_hz.size();
  grid.fidelity.assign(ne, std::vector<double>(nd, 0.0));
  grid.t_f.assign(ne, std::vector<double>(nd, 0.0));

  const size_t total = ne * nd;
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
      size_t i = idx / nd, j = idx % nd;
      GateResult r = simulate_gate(config, eta_axis[i], delta_axis_hz[j]);
      grid.fidelity[i][j] = r.avg_fidelity;
      grid.t_f[i][j] = r.t_f;
    }
  };
  unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
  if (n_threads == 1 || total == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return grid;
}

std::optional<double> min_delta_for_target(const Config& config, double eta,
                                           double f_target, double delta_lo_hz,
                                           double delta_hi_hz, double tol_hz) {
  if (!(delta_lo_hz < delta_hi_hz) || !(tol_hz > 0))
    throw std::invalid_argument("min_delta_for_target: bad bracket");
  auto fid = [&](double d) {
    return simulate_gate(config, eta, d).avg_fidelity;
  };
  if (fid(delta_lo_hz) >= f_target) return delta_lo_hz;
  if (fid(delta_hi_hz) < f_target) return std::nullopt;
  double lo = delta_lo_hz, hi = delta_hi_hz;
  while (hi - lo > tol_hz) {
    double mid = 0.5 * (lo + hi);
    if (fid(mid) >= f_target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::string grid_csv(const FidelityGrid& grid) {
  std::string out = "eta,delta2_hz,fidelity,t_f_s\n";
  char buf[160];
  for (size_t i = 0; i < grid.eta_axis.size(); ++i)
    for (size_t j = 0; j < grid.delta_axis_hz.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.17g,%.17g\n",
                    grid.eta_axis[i], grid.delta_axis_hz[j],
                    grid.fidelity[i][j], grid.t_f[i][j]);
      out += buf;
    }
  return out;
}

void emit_grid_csv(const FidelityGrid& grid, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_grid_csv: cannot write " + path);
  f << grid_csv(grid);
}

namespace {

void color_for(double f, double fmin, double fmax, char* out, size_t n) {
  double t = fmax > fmin ? (f - fmin) / (fmax - fmin) : 1.0;
  t = std::clamp(t, 0.0, 1.0);
  // dark blue -> teal -> yellow
  auto lerp = [](double a, double b, double u) { return a + (b - a) * u; };
  double r, g, b;
  if (t < 0.5) {
    double u = t / 0.5;
    r = lerp(40, 30, u), g = lerp(40, 150, u), b = lerp(90, 140, u);
  } else {
    double u = (t - 0.5) / 0.5;
    r = lerp(30, 250, u), g = lerp(150, 220, u), b = lerp(140, 60, u);
  }
  std::snprintf(out, n, "#%02x%02x%02x", int(r), int(g), int(b));
}

}  // namespace

std::string grid_svg(const FidelityGrid& grid) {
  const int margin = 60, plot = 520;
  const size_t ne = grid.eta_axis.size(), nd = grid.delta_axis_hz.size();
  const double cw = double(plot) / ne, ch = double(plot) / nd;
  const int width = margin * 2 + plot, height = margin * 2 + plot;

  std::string svg;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                width, height, width, height);
  svg += buf;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  double fmin = 1.0, fmax = 0.0;
  for (const auto& row : grid.fidelity)
    for (double f : row) {
      fmin = std::min(fmin, f);
      fmax = std::max(fmax, f);
    }

  char col[8];
  for (size_t i = 0; i < ne; ++i)
    for (size_t j = 0; j < nd; ++j) {
      double x = margin + i * cw;
      double y = margin + (nd - 1 - j) * ch;  // delta grows upward
      color_for(grid.fidelity[i][j], fmin, fmax, col, sizeof col);
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" "
                    "height=\"%.2f\" fill=\"%s\"/>\n",
                    x, y, cw + 0.01, ch + 0.01, col);
      svg += buf;
    }

  // Iso-fidelity contour: fidelity is monotone in the separation, so each
  // eta column crosses the threshold at most once.
  bool any_above = fmax >= grid.threshold;
  bool any_below = fmin < grid.threshold;
  if (any_above && any_below) {
    std::string pts;
    for (size_t i = 0; i < ne; ++i) {
      double xc = margin + (i + 0.5) * cw;
      double y = -1.0;
      if (grid.fidelity[i][0] >= grid.threshold) {
        y = margin + plot;  // contour below the window for this column
      } else {
        for (size_t j = 1; j < nd; ++j) {
          double f0 = grid.fidelity[i][j - 1], f1 = grid.fidelity[i][j];
          if (f0 < grid.threshold && f1 >= grid.threshold) {
            double u = (grid.threshold - f0) / (f1 - f0);
            double y0 = margin + (nd - 0.5 - (j - 1)) * ch;  // cell centers
            double y1 = margin + (nd - 0.5 - j) * ch;
            y = y0 + (y1 - y0) * u;
            break;
          }
        }
      }
      if (y >= 0) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", xc, y);
        pts += buf;
      }
    }
    if (!pts.empty()) {
      svg += "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"2\" "
             "points=\"" + pts + "\"/>\n";
    }
  }

  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-size=\"14\">pump amplitude "
                "eta (log, %.3g to %.3g)</text>\n",
                margin, height - margin / 3, grid.eta_axis.front(),
                grid.eta_axis.back());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"%d\" y=\"%d\" font-size=\"14\" "
                "transform=\"rotate(-90 %d %d)\">conversion separation (Hz, "
                "log, %.3g to %.3g)</text>\n",
                margin / 4, height - margin, margin / 4, height - margin,
                grid.delta_axis_hz.front(), grid.delta_axis_hz.back());
  svg += buf;
  svg += "</svg>\n";
  return svg;
}

void emit_heatmap_svg(const FidelityGrid& grid, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_heatmap_svg: cannot write " + path);
  f << grid_svg(grid);
}

}  // namespace snailbudget
