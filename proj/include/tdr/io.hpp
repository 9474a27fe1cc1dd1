#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdr/graph.hpp"

namespace tdr::io {

/// Parse failure with the 1-based line it occurred on.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Graph files ("tdg 1"): header, then `<nodes> <edges> <period>`, then one
// line per edge: `<tail> <head> <k> <t1> <w1> ... <tk> <wk>`.
std::string write_graph(const TdGraph& graph);
TdGraph read_graph(const std::string& text);

// Hierarchy files ("tch 1 <mode> <epsilon>"): counts line, node-rank line,
// then one line per edge: direction flag, tail, head, middle (-1 if
// original), and one TTF point list (exact) or two (lower and upper bounds).
std::string write_hierarchy(const Hierarchy& h);
Hierarchy read_hierarchy(const std::string& text);

/// One query: source, target, departure time.
struct QuerySpec {
  NodeId s;
  NodeId t;
  double tau;
};

// Query files: `<s> <t> <tau>` per line.
std::string write_queries(const std::vector<QuerySpec>& queries);
std::vector<QuerySpec> read_queries(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tdr::io
