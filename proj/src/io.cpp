#include "ase/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ase/errors.hpp"

namespace ase {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// ---- JsonWriter ------------------------------------------------------------

void JsonWriter::separator() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (counts_.back() > 0) os_ << ',';
  if (pretty_ && counts_.size() > 1) newline_indent();
  ++counts_.back();
}

void JsonWriter::newline_indent() {
  os_ << '\n';
  for (size_t i = 1; i < counts_.size(); ++i) os_ << "  ";
}

JsonWriter& JsonWriter::begin_object() {
  separator();
  os_ << '{';
  counts_.push_back(0);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  const bool had = counts_.back() > 0;
  counts_.pop_back();
  if (pretty_ && had) {
    os_ << '\n';
    for (size_t i = 1; i < counts_.size(); ++i) os_ << "  ";
  }
  os_ << '}';
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separator();
  os_ << '[';
  counts_.push_back(0);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  const bool had = counts_.back() > 0;
  counts_.pop_back();
  if (pretty_ && had) {
    os_ << '\n';
    for (size_t i = 1; i < counts_.size(); ++i) os_ << "  ";
  }
  os_ << ']';
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& name) {
  separator();
  os_ << '"';
  for (char c : name) {
    if (c == '"' || c == '\\') os_ << '\\';
    os_ << c;
  }
  os_ << "\": ";
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separator();
  if (std::isfinite(v))
    os_ << fmt17(v);
  else
    os_ << "null";
  return *this;
}

JsonWriter& JsonWriter::value(long long v) {
  separator();
  os_ << v;
  return *this;
}

JsonWriter& JsonWriter::value(uint64_t v) {
  separator();
  os_ << v;
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separator();
  os_ << '"';
  for (char c : v) {
    switch (c) {
      case '"': os_ << "\\\""; break;
      case '\\': os_ << "\\\\"; break;
      case '\n': os_ << "\\n"; break;
      case '\t': os_ << "\\t"; break;
      default: os_ << c;
    }
  }
  os_ << '"';
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separator();
  os_ << (v ? "true" : "false");
  return *this;
}

JsonWriter& JsonWriter::null() {
  separator();
  os_ << "null";
  return *this;
}

// ---- edge lists ------------------------------------------------------------

void write_edge_list(std::ostream& os, const AdjacencySample& A) {
  os << "# n=" << A.n() << " seed=" << A.seed() << "\n";
  for (auto [i, j] : A.edges()) os << i << ' ' << j << '\n';
}

EdgeListFile read_edge_list(std::istream& in, bool one_indexed) {
  EdgeListFile f;
  std::string line;
  int max_index = -1;
  bool have_n = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tok;
      while (hs >> tok) {
        if (tok.rfind("n=", 0) == 0) {
          f.n = std::stoi(tok.substr(2));
          have_n = true;
        } else if (tok.rfind("seed=", 0) == 0) {
          f.seed = std::stoull(tok.substr(5));
        }
      }
      continue;
    }
    std::istringstream ls(line);
    long long i, j;
    if (!(ls >> i >> j))
      throw ValidationError("edge list: cannot parse line '" + line + "'");
    if (one_indexed) {
      --i;
      --j;
    }
    if (i < 0 || j < 0) throw ValidationError("edge list: negative vertex index");
    if (i == j) throw ValidationError("edge list: self-loop at vertex " + std::to_string(i));
    max_index = std::max<long long>(max_index, std::max(i, j));
    f.edges.emplace_back((int)std::min(i, j), (int)std::max(i, j));
  }
  if (!have_n) f.n = max_index + 1;
  if (f.n <= max_index)
    throw ValidationError("edge list: vertex index " + std::to_string(max_index) +
                          " exceeds n=" + std::to_string(f.n));
  return f;
}

// ---- embeddings and labels -------------------------------------------------

void write_embedding_csv(std::ostream& os, const Matrix& Xhat) {
  os << "vertex";
  for (int j = 0; j < Xhat.cols(); ++j) os << ",x" << (j + 1);
  os << ",eigval_rank\n";
  for (int i = 0; i < Xhat.rows(); ++i) {
    os << i;
    for (int j = 0; j < Xhat.cols(); ++j) os << ',' << fmt17(Xhat(i, j));
    os << ',' << Xhat.cols() << '\n';
  }
}

void write_eigenvalues_csv(std::ostream& os, const std::vector<double>& values) {
  os << "rank,value\n";
  for (size_t i = 0; i < values.size(); ++i) os << (i + 1) << ',' << fmt17(values[i]) << '\n';
}

Matrix read_embedding_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("embedding csv: empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "vertex")
    throw ValidationError("embedding csv: unexpected header");
  const int d = (int)header.size() - 2;
  std::vector<double> data;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split_csv_line(line);
    if ((int)parts.size() != d + 2)
      throw ValidationError("embedding csv: wrong column count on row " + std::to_string(rows));
    for (int j = 0; j < d; ++j) data.push_back(std::stod(parts[1 + j]));
    ++rows;
  }
  Matrix X(rows, d);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < d; ++j) X(i, j) = data[size_t(i) * d + j];
  return X;
}

void write_labels_csv(std::ostream& os, const std::vector<int>* truth,
                      const std::vector<int>* predicted) {
  const size_t n = truth ? truth->size() : predicted->size();
  os << "vertex,label_true,label_hat\n";
  for (size_t i = 0; i < n; ++i) {
    os << i << ',';
    if (truth) os << (*truth)[i];
    os << ',';
    if (predicted) os << (*predicted)[i];
    os << '\n';
  }
}

void read_labels_csv(std::istream& in, std::vector<int>& truth, std::vector<int>& predicted) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("labels csv: empty file");
  truth.clear();
  predicted.clear();
  bool any_truth = false, any_pred = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split_csv_line(line);
    if (parts.size() != 3) throw ValidationError("labels csv: expected 3 columns");
    if (!parts[1].empty()) {
      truth.push_back(std::stoi(parts[1]));
      any_truth = true;
    }
    if (!parts[2].empty()) {
      predicted.push_back(std::stoi(parts[2]));
      any_pred = true;
    }
  }
  if (!any_truth) truth.clear();
  if (!any_pred) predicted.clear();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << text;
}

}  // namespace ase
