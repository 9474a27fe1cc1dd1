#include "tdr/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

namespace tdr::io {

namespace {

// Shortest round-trip decimal form; files re-parse to the exact same bits.
void append_num(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void append_num(std::string& out, long long v) { out += std::to_string(v); }

void append_ttf(std::string& out, const Ttf& f) {
  out += ' ';
  append_num(out, static_cast<long long>(f.size()));
  for (const auto& p : f.points()) {
    out += ' ';
    append_num(out, p.time);
    out += ' ';
    append_num(out, p.value);
  }
}

// Whitespace tokenizer over one line, reporting errors with the line number.
class LineTokens {
 public:
  LineTokens(std::string_view line, std::size_t line_no) : rest_(line), line_no_(line_no) {}

  bool at_end() {
    skip_space();
    return rest_.empty();
  }

  std::string_view next(const char* what) {
    skip_space();
    if (rest_.empty()) throw ParseError(line_no_, std::string("expected ") + what);
    std::size_t n = 0;
    while (n < rest_.size() && !is_space(rest_[n])) ++n;
    std::string_view tok = rest_.substr(0, n);
    rest_.remove_prefix(n);
    return tok;
  }

  double number(const char* what) {
    std::string_view tok = next(what);
    double v;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
      throw ParseError(line_no_, std::string("bad number for ") + what);
    return v;
  }

  long long integer(const char* what) {
    std::string_view tok = next(what);
    long long v;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
      throw ParseError(line_no_, std::string("bad integer for ") + what);
    return v;
  }

  void expect_end() {
    if (!at_end()) throw ParseError(line_no_, "trailing tokens");
  }

  std::size_t line_no() const { return line_no_; }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }
  void skip_space() {
    while (!rest_.empty() && is_space(rest_.front())) rest_.remove_prefix(1);
  }

  std::string_view rest_;
  std::size_t line_no_;
};

// Splits text into lines and walks them, skipping blank lines.
class LineReader {
 public:
  explicit LineReader(const std::string& text) : text_(text) {}

  bool next(LineTokens& out) {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string::npos) end = text_.size();
      std::string_view line(text_.data() + pos_, end - pos_);
      pos_ = end + 1;
      ++line_no_;
      bool blank = true;
      for (char c : line)
        if (c != ' ' && c != '\t' && c != '\r') {
          blank = false;
          break;
        }
      if (!blank) {
        out = LineTokens(line, line_no_);
        return true;
      }
    }
    return false;
  }

  LineTokens require(const char* what) {
    LineTokens t({}, line_no_);
    if (!next(t)) throw ParseError(line_no_ + 1, std::string("missing ") + what);
    return t;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

Ttf parse_ttf(LineTokens& t, double period) {
  long long k = t.integer("point count");
  if (k < 1) throw ParseError(t.line_no(), "point count must be positive");
  std::vector<TtfPoint> pts;
  pts.reserve(static_cast<std::size_t>(k));
  for (long long i = 0; i < k; ++i) {
    double x = t.number("point time");
    double y = t.number("point value");
    pts.push_back({x, y});
  }
  try {
    return Ttf(std::move(pts), period);
  } catch (const std::invalid_argument& e) {
    throw ParseError(t.line_no(), e.what());
  }
}

}  // namespace

std::string write_graph(const TdGraph& graph) {
  std::string out = "tdg 1\n";
  append_num(out, static_cast<long long>(graph.node_count()));
  out += ' ';
  append_num(out, static_cast<long long>(graph.edge_count()));
  out += ' ';
  append_num(out, graph.period());
  out += '\n';
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const Edge& ed = graph.edge(e);
    append_num(out, static_cast<long long>(ed.tail));
    out += ' ';
    append_num(out, static_cast<long long>(ed.head));
    append_ttf(out, ed.ttf);
    out += '\n';
  }
  return out;
}

TdGraph read_graph(const std::string& text) {
  LineReader reader(text);
  LineTokens header = reader.require("header");
  if (header.next("magic") != "tdg" || header.integer("version") != 1)
    throw ParseError(header.line_no(), "not a tdg version 1 file");
  LineTokens counts = reader.require("counts line");
  long long nodes = counts.integer("node count");
  long long edges = counts.integer("edge count");
  double period = counts.number("period");
  counts.expect_end();
  if (nodes < 0 || edges < 0) throw ParseError(counts.line_no(), "negative count");

  std::vector<Edge> edge_list;
  edge_list.reserve(static_cast<std::size_t>(edges));
  for (long long i = 0; i < edges; ++i) {
    LineTokens t = reader.require("edge line");
    long long tail = t.integer("tail");
    long long head = t.integer("head");
    if (tail < 0 || head < 0) throw ParseError(t.line_no(), "negative node id");
    Ttf f = parse_ttf(t, period);
    t.expect_end();
    edge_list.push_back({static_cast<NodeId>(tail), static_cast<NodeId>(head), std::move(f)});
  }
  try {
    return TdGraph(static_cast<NodeId>(nodes), std::move(edge_list), period);
  } catch (const std::invalid_argument& e) {
    throw ParseError(reader.line_no(), e.what());
  }
}

std::string write_hierarchy(const Hierarchy& h) {
  std::string out = "tch 1 ";
  out += h.mode == HierarchyMode::kExact ? "exact" : "approx";
  out += ' ';
  append_num(out, h.epsilon);
  out += '\n';
  append_num(out, static_cast<long long>(h.node_count));
  out += ' ';
  append_num(out, static_cast<long long>(h.edges.size()));
  out += ' ';
  append_num(out, h.period);
  out += '\n';
  for (NodeId v = 0; v < h.node_count; ++v) {
    if (v) out += ' ';
    append_num(out, static_cast<long long>(h.rank[v]));
  }
  if (h.node_count) out += '\n';
  for (EdgeId e = 0; e < h.edges.size(); ++e) {
    const HierarchyEdge& he = h.edges[e];
    out += h.goes_up(e) ? 'U' : 'D';
    out += ' ';
    append_num(out, static_cast<long long>(he.tail));
    out += ' ';
    append_num(out, static_cast<long long>(he.head));
    out += ' ';
    append_num(out, he.is_shortcut() ? static_cast<long long>(he.middle) : -1LL);
    if (he.bounds) {
      append_ttf(out, he.bounds->lower);
      append_ttf(out, he.bounds->upper);
    } else {
      append_ttf(out, he.exact());
    }
    out += '\n';
  }
  return out;
}

Hierarchy read_hierarchy(const std::string& text) {
  LineReader reader(text);
  LineTokens header = reader.require("header");
  if (header.next("magic") != "tch" || header.integer("version") != 1)
    throw ParseError(header.line_no(), "not a tch version 1 file");
  std::string_view mode_tok = header.next("mode");
  Hierarchy h;
  if (mode_tok == "exact") {
    h.mode = HierarchyMode::kExact;
  } else if (mode_tok == "approx") {
    h.mode = HierarchyMode::kApprox;
  } else {
    throw ParseError(header.line_no(), "mode must be exact or approx");
  }
  h.epsilon = header.number("epsilon");

  LineTokens counts = reader.require("counts line");
  long long nodes = counts.integer("node count");
  long long edges = counts.integer("edge count");
  h.period = counts.number("period");
  counts.expect_end();
  if (nodes < 0 || edges < 0) throw ParseError(counts.line_no(), "negative count");
  h.node_count = static_cast<NodeId>(nodes);

  if (nodes > 0) {
    LineTokens ranks = reader.require("rank line");
    h.rank.reserve(h.node_count);
    for (long long i = 0; i < nodes; ++i) {
      long long r = ranks.integer("rank");
      if (r < 0 || r >= nodes) throw ParseError(ranks.line_no(), "rank out of range");
      h.rank.push_back(static_cast<std::uint32_t>(r));
    }
    ranks.expect_end();
  }

  h.edges.reserve(static_cast<std::size_t>(edges));
  for (long long i = 0; i < edges; ++i) {
    LineTokens t = reader.require("edge line");
    std::string_view dir = t.next("direction");
    if (dir != "U" && dir != "D") throw ParseError(t.line_no(), "direction must be U or D");
    HierarchyEdge he;
    long long tail = t.integer("tail");
    long long head = t.integer("head");
    long long middle = t.integer("middle");
    if (tail < 0 || tail >= nodes || head < 0 || head >= nodes)
      throw ParseError(t.line_no(), "edge endpoint out of range");
    if (middle < -1 || middle >= nodes) throw ParseError(t.line_no(), "middle out of range");
    he.tail = static_cast<NodeId>(tail);
    he.head = static_cast<NodeId>(head);
    he.middle = middle < 0 ? kNoNode : static_cast<NodeId>(middle);
    if (h.mode == HierarchyMode::kApprox && he.is_shortcut()) {
      Ttf lower = parse_ttf(t, h.period);
      Ttf upper = parse_ttf(t, h.period);
      he.bounds = BoundPair{std::move(lower), std::move(upper)};
    } else {
      he.exact_ttf = parse_ttf(t, h.period);
    }
    t.expect_end();
    bool up = h.rank[he.tail] < h.rank[he.head];
    if (up != (dir == "U")) throw ParseError(t.line_no(), "direction flag contradicts ranks");
    h.edges.push_back(std::move(he));
  }
  try {
    h.finalize();
  } catch (const std::exception& e) {
    throw ParseError(reader.line_no(), e.what());
  }
  return h;
}

std::string write_queries(const std::vector<QuerySpec>& queries) {
  std::string out;
  for (const auto& q : queries) {
    append_num(out, static_cast<long long>(q.s));
    out += ' ';
    append_num(out, static_cast<long long>(q.t));
    out += ' ';
    append_num(out, q.tau);
    out += '\n';
  }
  return out;
}

std::vector<QuerySpec> read_queries(const std::string& text) {
  LineReader reader(text);
  std::vector<QuerySpec> out;
  LineTokens t({}, 0);
  while (reader.next(t)) {
    long long s = t.integer("source");
    long long tt = t.integer("target");
    double tau = t.number("departure");
    t.expect_end();
    if (s < 0 || tt < 0) throw ParseError(t.line_no(), "negative node id");
    out.push_back({static_cast<NodeId>(s), static_cast<NodeId>(tt), tau});
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace tdr::io
