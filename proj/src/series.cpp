#include <fstream>
#include <sstream>

#include "triwave/errors.hpp"
#include "triwave/io.hpp"

namespace triwave {

void write_series(std::ostream& out, const Trajectory& traj, int dim) {
  out << "t,M,M1,M2,M3,K,E";
  for (int a = 1; a <= dim; ++a) out << ",P_" << a;
  out << ",verdict\n";
  const std::size_t rows = traj.times.size();
  for (std::size_t i = 0; i < rows; ++i) {
    const InvariantSet& s = traj.invariant_series[i];
    out << format_double(traj.times[i]) << ',' << format_double(s.M) << ',' << format_double(s.M1)
        << ',' << format_double(s.M2) << ',' << format_double(s.M3) << ',' << format_double(s.K)
        << ',' << format_double(s.E);
    for (int a = 0; a < dim; ++a) out << ',' << format_double(s.P[a]);
    const Verdict v = i + 1 == rows ? traj.verdict : Verdict::completed;
    out << ',' << verdict_name(v) << '\n';
  }
}

void write_series(const std::string& path, const Trajectory& traj, int dim) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_series(out, traj, dim);
  if (!out) throw IoError("write to '" + path + "' failed");
}

SeriesTable read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open series '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,M,M1,M2,M3,K,E", 0) != 0)
    throw IoError("series '" + path + "' has no recognised header");
  int columns = 1;
  for (char ch : line) columns += ch == ',';
  const int dim = columns - 8;
  if (dim < 1) throw IoError("series header lacks momentum columns");

  SeriesTable table;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != columns)
      throw IoError("series line " + std::to_string(lineno) + ": wrong column count");
    std::vector<double> v;
    for (int k = 0; k + 1 < columns; ++k) {
      try {
        v.push_back(std::stod(cells[k]));
      } catch (const std::exception&) {
        throw IoError("series line " + std::to_string(lineno) + ": bad number '" + cells[k] + "'");
      }
    }
    InvariantSet s;
    s.M = v[1];
    s.M1 = v[2];
    s.M2 = v[3];
    s.M3 = v[4];
    s.K = v[5];
    s.E = v[6];
    s.P = Eigen::Map<const Eigen::VectorXd>(v.data() + 7, dim);
    table.times.push_back(v[0]);
    table.rows.push_back(std::move(s));
    table.verdicts.push_back(cells.back());
  }
  return table;
}

}  // namespace triwave
