#include "dgff/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dgff {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

void write_stamp(std::ostream& os, std::string_view schema, const FileStamp& stamp) {
  os << "# dgff-sle schema=" << schema << "/1 config_hash=" << stamp.config_hash << " seed=" << stamp.seed << '\n';
}

void write_field_csv(std::ostream& os, const Field& f, const FileStamp& stamp) {
  write_stamp(os, "field", stamp);
  os << "vertex_id,i,j,x,y,h\n";
  const auto old = os.precision(17);
  const GridDomain& d = *f.domain;
  for (std::size_t v = 0; v < d.vertex_count(); ++v) {
    const auto id = static_cast<VertexId>(v);
    const auto& s = d.site(id);
    const Complex p = d.position(id);
    os << v << ',' << s.i << ',' << s.j << ',' << p.real() << ',' << p.imag() << ',' << f.values[v] << '\n';
  }
  os.precision(old);
}

Field read_field_csv(std::istream& is, const DomainPtr& domain) {
  Field f(domain);
  std::string line;
  bool header = false;
  std::size_t seen = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("vertex_id,", 0) != 0) throw std::invalid_argument("field CSV lacks its header row");
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw std::invalid_argument("field CSV row has " + std::to_string(cells.size()) + " columns");
    const long v = std::stol(cells[0]);
    if (v < 0 || static_cast<std::size_t>(v) >= domain->vertex_count())
      throw std::invalid_argument("field CSV vertex id out of range");
    const LatticeSite& s = domain->site(static_cast<VertexId>(v));
    if (std::stoi(cells[1]) != s.i || std::stoi(cells[2]) != s.j)
      throw std::invalid_argument("field CSV does not match the configured domain");
    f[static_cast<VertexId>(v)] = std::stod(cells[5]);
    ++seen;
  }
  if (seen != domain->vertex_count()) throw std::invalid_argument("field CSV does not cover every vertex");
  return f;
}

void write_interface_csv(std::ostream& os, std::span<const Complex> points, const FileStamp& stamp) {
  write_stamp(os, "interface", stamp);
  os << "step,x,y\n";
  const auto old = os.precision(17);
  for (std::size_t k = 0; k < points.size(); ++k) os << k << ',' << points[k].real() << ',' << points[k].imag() << '\n';
  os.precision(old);
}

void write_zero_arcs_csv(std::ostream& os, std::span<const ZeroArc> arcs, const FileStamp& stamp) {
  write_stamp(os, "zero_arcs", stamp);
  os << "arc,closed,step,x,y\n";
  const auto old = os.precision(17);
  for (std::size_t a = 0; a < arcs.size(); ++a)
    for (std::size_t k = 0; k < arcs[a].points.size(); ++k)
      os << a << ',' << (arcs[a].closed ? 1 : 0) << ',' << k << ',' << arcs[a].points[k].real() << ','
         << arcs[a].points[k].imag() << '\n';
  os.precision(old);
}

void write_driving_csv(std::ostream& os, const DrivingFunction& W, const FileStamp& stamp) {
  write_stamp(os, "driving", stamp);
  os << "t,W\n";
  const auto old = os.precision(17);
  for (std::size_t k = 0; k < W.size(); ++k) os << W.t[k] << ',' << W.W[k] << '\n';
  os.precision(old);
}

void write_fixed_frame_csv(std::ostream& os, std::span<const double> s, std::span<const double> Y,
                           const FileStamp& stamp) {
  write_stamp(os, "fixed_frame", stamp);
  os << "s,Y\n";
  const auto old = os.precision(17);
  for (std::size_t k = 0; k < s.size(); ++k) os << s[k] << ',' << Y[k] << '\n';
  os.precision(old);
}

void write_field_svg(std::ostream& os, const Field& f, std::span<const std::vector<Complex>> curves) {
  const GridDomain& d = *f.domain;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (std::size_t v = 0; v < d.vertex_count(); ++v) {
    const Complex p = d.position(static_cast<VertexId>(v));
    x0 = std::min(x0, p.real()), x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag()), y1 = std::max(y1, p.imag());
  }
  const double scale = 800.0 / std::max(x1 - x0 + 2.0, y1 - y0 + 2.0);
  auto X = [&](Complex p) { return (p.real() - x0 + 1.0) * scale; };
  auto Y = [&](Complex p) { return (y1 - p.imag() + 1.0) * scale; };
  std::vector<double> sorted = f.values;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double h) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), h);
    return sorted.size() > 1 ? static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size() - 1) : 0.5;
  };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << (x1 - x0 + 2.0) * scale << "\" height=\""
     << (y1 - y0 + 2.0) * scale << "\">\n";
  char buf[64];
  for (std::size_t v = 0; v < d.vertex_count(); ++v) {
    const auto poly = d.dual_cell_polygon(static_cast<VertexId>(v));
    const int g = static_cast<int>(std::lround(255.0 * quantile(f.values[v])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", g, g, g);
    os << "<polygon fill=\"" << buf << "\" points=\"";
    for (const Complex& p : poly) os << X(p) << ',' << Y(p) << ' ';
    os << "\"/>\n";
  }
  for (const auto& c : curves) {
    os << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"" << std::max(1.0, 0.15 * scale)
       << "\" points=\"";
    for (const Complex& p : c) os << X(p) << ',' << Y(p) << ' ';
    os << "\"/>\n";
  }
  os << "</svg>\n";
}

std::string summaries_json(std::span<const EnsembleSummary> summaries, int indent) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : summaries) {
    nlohmann::json j;
    j["test"] = s.test_name;
    j["n"] = s.n;
    j["estimate"] = s.estimate;
    j["se"] = s.std_error;
    j["ci95"] = {s.ci_low, s.ci_high};
    j["threshold"] = s.threshold;
    j["pass"] = s.pass;
    j["seed"] = s.seed;
    if (std::isfinite(s.p_value)) j["p_value"] = s.p_value;
    arr.push_back(std::move(j));
  }
  return arr.dump(indent);
}

}  // namespace dgff
