#pragma once
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ase/graph_models.hpp"
#include "ase/matrix.hpp"

namespace ase {

// 17 significant digits: round-trips every double exactly.
std::string fmt17(double x);
// shorter form for plot coordinates
std::string fmt6(double x);

std::vector<std::string> split_csv_line(const std::string& line);

// Minimal JSON emitter with explicit float formatting (fmt17). Handles
// nesting/commas; strings are escaped; non-finite doubles become null.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& os, bool pretty = true) : os_(os), pretty_(pretty) {}

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& name);
  JsonWriter& value(double v);
  JsonWriter& value(long long v);
  JsonWriter& value(int v) { return value((long long)v); }
  JsonWriter& value(uint64_t v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& value(bool v);
  JsonWriter& null();

 private:
  void separator();
  void newline_indent();
  std::ostream& os_;
  bool pretty_;
  std::vector<int> counts_{0};  // items emitted at each depth
  bool after_key_ = false;
};

// Edge list: "# n=<n> seed=<seed>" header, then one "i j" pair per line
// (0-indexed, i < j).
void write_edge_list(std::ostream& os, const AdjacencySample& A);

struct EdgeListFile {
  int n = 0;
  uint64_t seed = 0;
  std::vector<std::pair<int, int>> edges;
};

EdgeListFile read_edge_list(std::istream& in, bool one_indexed = false);

// Embedding CSV: "vertex,x1,...,xd,eigval_rank"; eigenvalues CSV: "rank,value".
void write_embedding_csv(std::ostream& os, const Matrix& Xhat);
void write_eigenvalues_csv(std::ostream& os, const std::vector<double>& values);
Matrix read_embedding_csv(std::istream& in);

// Labels CSV: "vertex,label_true,label_hat" (either label column may be empty).
void write_labels_csv(std::ostream& os, const std::vector<int>* truth,
                      const std::vector<int>* predicted);
void read_labels_csv(std::istream& in, std::vector<int>& truth, std::vector<int>& predicted);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ase
