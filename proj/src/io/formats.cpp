#include "eqvio/io/formats.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace eqvio::io {

using Eigen::Quaterniond;
using Eigen::Vector3d;

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

std::string formatDouble(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parseDouble(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double x = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return x;
}

namespace {

/// Numeric rows of a CSV stream with a fixed header.
class CsvReader {
 public:
  CsvReader(std::istream& is, std::string source, std::string_view header)
      : is_(is), source_(std::move(source)), columns_(1) {
    for (char c : header) columns_ += (c == ',');
    std::string line;
    if (!next(line)) throw ParseError(source_, 1, "missing header");
    if (line != header) throw ParseError(source_, line_, "expected header '" + std::string(header) + "'");
  }

  /// Next data row; false at end of input.
  bool row(std::vector<double>& out) {
    std::string line;
    while (next(line)) {
      if (line.empty()) continue;
      out.clear();
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = line.find(',', start);
        const std::size_t end = comma == std::string::npos ? line.size() : comma;
        try {
          out.push_back(parseDouble(std::string_view(line).substr(start, end - start)));
        } catch (const std::invalid_argument& e) {
          fail(e.what());
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (out.size() != columns_) {
        fail("expected " + std::to_string(columns_) + " columns, found " + std::to_string(out.size()));
      }
      for (double x : out) {
        if (!std::isfinite(x)) fail("non-finite value");
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(source_, line_, message); }

 private:
  bool next(std::string& line) {
    if (!std::getline(is_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::istream& is_;
  std::string source_;
  std::size_t columns_;
  std::size_t line_ = 0;
};

void writeRow(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << formatDouble(values[i]);
  }
  os << '\n';
}

template <typename Derived>
void append(std::vector<double>& row, const Eigen::MatrixBase<Derived>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(v(i));
}

void append(std::vector<double>& row, const Quaterniond& q) { row.insert(row.end(), {q.w(), q.x(), q.y(), q.z()}); }

void appendNav(std::vector<double>& row, const NavRecord& r) {
  row.push_back(r.t);
  append(row, r.p);
  append(row, r.q);
  append(row, r.v);
}

Quaterniond quaternionAt(const std::vector<double>& r, std::size_t i, const CsvReader& reader) {
  const Quaterniond q(r[i], r[i + 1], r[i + 2], r[i + 3]);
  if (q.norm() < 1e-9) reader.fail("zero quaternion");
  return q;
}

NavRecord navFromRow(const std::vector<double>& r, const CsvReader& reader) {
  NavRecord n;
  n.t = r[0];
  n.p = Vector3d(r[1], r[2], r[3]);
  n.q = quaternionAt(r, 4, reader);
  n.v = Vector3d(r[8], r[9], r[10]);
  return n;
}

/// Rejects non-increasing timestamps.
class Monotone {
 public:
  void check(double t, const CsvReader& reader) {
    if (any_ && !(t > last_)) reader.fail("timestamps must be strictly increasing");
    last_ = t;
    any_ = true;
  }

 private:
  double last_ = 0.0;
  bool any_ = false;
};

}  // namespace

lie::SE23 NavRecord::nav() const { return lie::SE23(lie::SO3::fromQuaternion(q), p, v); }

NavRecord NavRecord::fromNav(double t, const lie::SE23& X) { return NavRecord{t, X.x(), X.R().quaternion(), X.v()}; }

EstimateRecord EstimateRecord::fromState(double t, const vislam::VisState& xi) {
  EstimateRecord e;
  e.nav = NavRecord::fromNav(t, xi.nav());
  e.bias = xi.bias;
  e.extrinsicTranslation = xi.extrinsics.x();
  e.extrinsicRotation = xi.extrinsics.R().quaternion();
  return e;
}

void writeImu(std::ostream& os, const std::vector<eqf::ImuSample>& imu) {
  os << kImuHeader << '\n';
  std::vector<double> row;
  for (const auto& s : imu) {
    row.assign({s.t});
    append(row, s.u.omega);
    append(row, s.u.accel);
    writeRow(os, row);
  }
}

std::vector<eqf::ImuSample> readImu(std::istream& is, const std::string& source) {
  CsvReader reader(is, source, kImuHeader);
  std::vector<eqf::ImuSample> out;
  std::vector<double> r;
  Monotone order;
  while (reader.row(r)) {
    order.check(r[0], reader);
    eqf::ImuSample s;
    s.t = r[0];
    s.u.omega = Vector3d(r[1], r[2], r[3]);
    s.u.accel = Vector3d(r[4], r[5], r[6]);
    out.push_back(s);
  }
  return out;
}

void writeFeatures(std::ostream& os, const std::vector<eqf::FrameSample>& frames) {
  os << kFeatureHeader << '\n';
  std::vector<double> row;
  for (const auto& f : frames) {
    for (const auto& b : f.bearings) {
      row.assign({f.t, static_cast<double>(b.id)});
      append(row, b.y);
      writeRow(os, row);
    }
  }
}

std::vector<eqf::FrameSample> readFeatures(std::istream& is, const std::string& source) {
  CsvReader reader(is, source, kFeatureHeader);
  std::map<double, eqf::FrameSample> frames;
  std::map<double, std::set<int>> seen;
  std::vector<double> r;
  while (reader.row(r)) {
    const double id = r[1];
    if (id < 0.0 || id != std::floor(id) || id > 2147483647.0) {
      reader.fail("feature id must be a non-negative integer");
    }
    const Vector3d y(r[2], r[3], r[4]);
    if (std::abs(y.norm() - 1.0) > 1e-6) reader.fail("bearing is not a unit vector");
    if (!seen[r[0]].insert(static_cast<int>(id)).second) reader.fail("duplicate feature id in frame");
    auto& f = frames[r[0]];
    f.t = r[0];
    f.bearings.push_back({static_cast<int>(id), y});
  }
  std::vector<eqf::FrameSample> out;
  for (auto& entry : frames) out.push_back(std::move(entry.second));
  return out;
}

void writeTruth(std::ostream& os, const std::vector<NavRecord>& truth) {
  os << kTruthHeader << '\n';
  std::vector<double> row;
  for (const auto& r : truth) {
    row.clear();
    appendNav(row, r);
    writeRow(os, row);
  }
}

std::vector<NavRecord> readTruth(std::istream& is, const std::string& source) {
  CsvReader reader(is, source, kTruthHeader);
  std::vector<NavRecord> out;
  std::vector<double> r;
  Monotone order;
  while (reader.row(r)) {
    order.check(r[0], reader);
    out.push_back(navFromRow(r, reader));
  }
  return out;
}

void writeEstimates(std::ostream& os, const std::vector<EstimateRecord>& estimates) {
  os << kEstimateHeader << '\n';
  std::vector<double> row;
  for (const auto& e : estimates) {
    row.clear();
    appendNav(row, e.nav);
    append(row, e.bias);
    append(row, e.extrinsicTranslation);
    append(row, e.extrinsicRotation);
    writeRow(os, row);
  }
}

std::vector<EstimateRecord> readEstimates(std::istream& is, const std::string& source) {
  CsvReader reader(is, source, kEstimateHeader);
  std::vector<EstimateRecord> out;
  std::vector<double> r;
  Monotone order;
  while (reader.row(r)) {
    order.check(r[0], reader);
    EstimateRecord e;
    e.nav = navFromRow(r, reader);
    for (int i = 0; i < 6; ++i) e.bias(i) = r[11 + i];
    e.extrinsicTranslation = Vector3d(r[17], r[18], r[19]);
    e.extrinsicRotation = quaternionAt(r, 20, reader);
    out.push_back(e);
  }
  return out;
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace eqvio::io
