#include "bicons4/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bicons4 {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Quadrature: return "Quadrature";
    case Provenance::ExplicitODE: return "ExplicitODE";
    case Provenance::Synthesized: return "Synthesized";
    case Provenance::Tabulated: return "Tabulated";
  }
  return "?";
}

ProfileSolution::ProfileSolution(std::vector<double> s, std::vector<double> f, std::vector<double> fp,
                                 std::vector<double> fpp, Provenance prov)
    : s_(std::move(s)), f_(std::move(f)), fp_(std::move(fp)), fpp_(std::move(fpp)), prov_(prov) {
  const std::size_t n = s_.size();
  if (n < 2 || f_.size() != n || fp_.size() != n || fpp_.size() != n)
    throw Error(ErrorKind::BadParams, "profile table needs at least two rows of equal length");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(s_[i]) || !std::isfinite(f_[i]) || !std::isfinite(fp_[i]) || !std::isfinite(fpp_[i]))
      throw Error(ErrorKind::BadParams, "profile table contains a non-finite value", s_[i]);
    if (i > 0 && !(s_[i] > s_[i - 1])) throw Error(ErrorKind::BadParams, "profile grid must be strictly increasing", s_[i]);
  }
  fpp_slope_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i == 0 ? 0 : i - 1, hi = i + 1 == n ? i : i + 1;
    fpp_slope_[i] = (fpp_[hi] - fpp_[lo]) / (s_[hi] - s_[lo]);
  }
}

std::size_t ProfileSolution::locate(double s) const {
  const double span = s_.back() - s_.front();
  const double slack = 1e-12 * std::max(1.0, span);
  if (!(s >= s_.front() - slack && s <= s_.back() + slack)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "s=%.17g outside the profile interval [%.17g, %.17g]", s, s_.front(), s_.back());
    throw Error(ErrorKind::IntervalMismatch, buf, s);
  }
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t i = it == s_.begin() ? 0 : static_cast<std::size_t>(it - s_.begin()) - 1;
  return std::min(i, s_.size() - 2);
}

namespace {

struct Hermite {
  double value, slope;
};

Hermite hermite(double x0, double x1, double y0, double y1, double m0, double m1, double x) {
  double h = x1 - x0, t = (x - x0) / h;
  double t2 = t * t, t3 = t2 * t;
  double v = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * m1;
  double d = ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * m0 + (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * h * m1) / h;
  return {v, d};
}

}  // namespace

std::array<double, 4> ProfileSolution::eval(double s) const {
  std::size_t i = locate(s);
  const double a = s_[i], b = s_[i + 1];
  if (closed_) {
    std::array<double, 3> d = closed_->derivs(s);
    double f;
    if (closed_->f) {
      f = closed_->f(s);
    } else {
      std::size_t k = (s - a <= b - s) ? i : i + 1;
      f = f_[k] + integrate([this](double x) { return closed_->derivs(x)[0]; }, s_[k], s, 1e-13, true);
    }
    return {f, d[0], d[1], d[2]};
  }
  Hermite f = hermite(a, b, f_[i], f_[i + 1], fp_[i], fp_[i + 1], s);
  Hermite fp = hermite(a, b, fp_[i], fp_[i + 1], fpp_[i], fpp_[i + 1], s);
  Hermite fpp = hermite(a, b, fpp_[i], fpp_[i + 1], fpp_slope_[i], fpp_slope_[i + 1], s);
  return {f.value, fp.value, fpp.value, fpp.slope};
}

Jet3 ProfileSolution::lift(const Jet3& s) const { return compose(s, eval(s.value())); }

void ProfileSolution::write_csv(std::ostream& os) const {
  os << "s,f,fp,fpp\n";
  char buf[128];
  for (std::size_t i = 0; i < s_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s_[i], f_[i], fp_[i], fpp_[i]);
    os << buf;
  }
}

ProfileSolution ProfileSolution::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::Io, "profile CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "s,f,fp,fpp") throw Error(ErrorKind::Io, "profile CSV header must be 's,f,fp,fpp', got '" + line + "'");
  std::vector<double> cols[4];
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= 4) throw Error(ErrorKind::Io, "profile CSV row " + std::to_string(row) + " has more than 4 columns");
      char* end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw Error(ErrorKind::Io, "profile CSV row " + std::to_string(row) + ": cannot parse '" + cell + "'");
      cols[c++].push_back(v);
    }
    if (c != 4) throw Error(ErrorKind::Io, "profile CSV row " + std::to_string(row) + " has fewer than 4 columns");
  }
  return ProfileSolution(std::move(cols[0]), std::move(cols[1]), std::move(cols[2]), std::move(cols[3]),
                         Provenance::Tabulated);
}

ProfileSolution ProfileSolution::read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open profile file '" + path + "'");
  return read_csv(in);
}

}  // namespace bicons4
