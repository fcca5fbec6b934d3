#include "sdnopt/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

namespace sdnopt {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

struct HostRow {
  HostId id;
  SwitchId sw;
  bool ingress;
  bool egress;
};

std::vector<HostRow> host_rows(const Topology& t) {
  std::map<HostId, HostRow> rows;
  for (const auto& [h, sw] : t.ingress_hosts) rows[h] = {h, sw, true, false};
  for (const auto& [h, sw] : t.egress_hosts) {
    auto it = rows.find(h);
    if (it == rows.end()) {
      rows[h] = {h, sw, false, true};
    } else {
      it->second.egress = true;
    }
  }
  std::vector<HostRow> out;
  for (const auto& [h, row] : rows) {
    (void)h;
    out.push_back(row);
  }
  return out;
}

void write_matrix(std::ostringstream& os, const std::vector<std::vector<double>>& m) {
  for (const auto& row : m) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ' ';
      os << format_double(row[i]);
    }
    os << '\n';
  }
}

}  // namespace

std::string write_instance(const Instance& inst) {
  const Topology& t = inst.topology;
  std::ostringstream os;
  os << "sdnopt-instance 1\n";

  os << "SWITCHES " << t.switches.size() << '\n';
  std::vector<SwitchSpec> switches = t.switches;
  std::sort(switches.begin(), switches.end(),
            [](const SwitchSpec& a, const SwitchSpec& b) { return a.id < b.id; });
  for (const auto& s : switches) {
    os << s.id << ' ' << format_double(s.power_cost) << ' ' << s.rule_capacity << ' ' << s.pod
       << ' ' << s.layer << '\n';
  }

  os << "EDGES " << t.edges.size() << '\n';
  std::vector<EdgeSpec> edges = t.edges;
  std::sort(edges.begin(), edges.end(), [](const EdgeSpec& x, const EdgeSpec& y) {
    return std::pair{x.a, x.b} < std::pair{y.a, y.b};
  });
  for (const auto& e : edges) {
    os << e.a << ' ' << e.b << ' ' << format_double(e.bandwidth) << ' '
       << format_double(e.power_cost) << '\n';
  }

  std::vector<HostRow> hosts = host_rows(t);
  os << "HOSTS " << hosts.size() << '\n';
  for (const auto& h : hosts) {
    os << h.id << ' ' << h.sw << ' ' << (h.ingress ? 1 : 0) << ' ' << (h.egress ? 1 : 0) << '\n';
  }

  os << "FLOWS " << inst.flows.size() << '\n';
  std::vector<Flow> flows = inst.flows;
  std::sort(flows.begin(), flows.end(), [](const Flow& a, const Flow& b) { return a.id < b.id; });
  for (const auto& f : flows) {
    os << f.id << ' ' << f.source << ' ' << f.destination << ' ' << format_double(f.rate) << '\n';
  }

  if (inst.placement) {
    const PlacementInstance& p = *inst.placement;
    os << "PLACEMENT\n";
    os << "RESOURCES " << p.resource_names.size();
    for (const auto& n : p.resource_names) os << ' ' << n;
    os << '\n';
    os << "PMS " << p.pm_count() << '\n';
    write_matrix(os, p.pm_resources);
    os << "VMS " << p.vm_count() << '\n';
    write_matrix(os, p.vm_demands);
    os << "TRAFFIC\n";
    write_matrix(os, p.vm_traffic);
    os << "HOPS\n";
    write_matrix(os, p.pm_hops);
  }
  return os.str();
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  // Next significant line split into tokens; skips blanks and '#' comments.
  bool next(std::vector<std::string>& tokens) {
    tokens.clear();
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++lineno_;
      raw_line_ = std::string(line);
      std::size_t hash = line.find('#');
      if (hash != std::string_view::npos) line = line.substr(0, hash);
      std::istringstream ss{std::string(line)};
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  int line() const { return lineno_; }

  // 1-based column of a token in the current line (0 when unknown).
  int column_of(const std::string& tok) const {
    const std::size_t at = raw_line_.find(tok);
    return at == std::string::npos ? 0 : static_cast<int>(at) + 1;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int lineno_ = 0;
  std::string raw_line_;
};

[[noreturn]] void fail(const std::string& msg, int line, int column = 0) {
  throw ParseError(msg, line, column);
}

long parse_long(const std::string& tok, const Reader& r) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    fail("expected integer, got '" + tok + "'", r.line(), r.column_of(tok));
  }
  return value;
}

double parse_num(const std::string& tok, const Reader& r) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    fail("expected number, got '" + tok + "'", r.line(), r.column_of(tok));
  }
  return value;
}

std::vector<std::string> expect_section(Reader& r, const std::string& name, std::size_t min_tokens) {
  std::vector<std::string> tokens;
  if (!r.next(tokens)) fail("missing section " + name, r.line());
  if (tokens[0] != name) fail("expected section " + name + ", got '" + tokens[0] + "'", r.line());
  if (tokens.size() < min_tokens) fail("section header " + name + " is incomplete", r.line());
  return tokens;
}

std::vector<std::vector<double>> read_matrix(Reader& r, int rows, int cols,
                                             const std::string& what) {
  std::vector<std::vector<double>> m;
  std::vector<std::string> tokens;
  for (int i = 0; i < rows; ++i) {
    if (!r.next(tokens)) fail("missing row " + std::to_string(i) + " of " + what, r.line());
    if (static_cast<int>(tokens.size()) != cols) {
      fail(what + " row has " + std::to_string(tokens.size()) + " values, expected " +
               std::to_string(cols),
           r.line());
    }
    std::vector<double> row;
    for (const auto& tok : tokens) row.push_back(parse_num(tok, r));
    m.push_back(std::move(row));
  }
  return m;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  Reader r(text);
  std::vector<std::string> tokens;
  if (!r.next(tokens)) fail("empty file; missing header", r.line());
  if (tokens.size() != 2 || tokens[0] != "sdnopt-instance") {
    fail("expected header 'sdnopt-instance <version>'", r.line());
  }
  if (tokens[1] != "1") {
    fail("unsupported format version '" + tokens[1] + "'; this build reads version 1", r.line());
  }

  Instance inst;
  Topology& t = inst.topology;

  tokens = expect_section(r, "SWITCHES", 2);
  const long nswitch = parse_long(tokens[1], r);
  for (long i = 0; i < nswitch; ++i) {
    if (!r.next(tokens)) fail("missing switch row in section SWITCHES", r.line());
    if (tokens.size() != 3 && tokens.size() != 5) {
      fail("switch row needs 3 or 5 columns (id power rules [pod layer])", r.line());
    }
    SwitchSpec s;
    s.id = static_cast<SwitchId>(parse_long(tokens[0], r));
    s.power_cost = parse_num(tokens[1], r);
    s.rule_capacity = static_cast<int>(parse_long(tokens[2], r));
    if (tokens.size() == 5) {
      s.pod = static_cast<int>(parse_long(tokens[3], r));
      s.layer = static_cast<int>(parse_long(tokens[4], r));
    }
    t.switches.push_back(s);
  }

  tokens = expect_section(r, "EDGES", 2);
  const long nedge = parse_long(tokens[1], r);
  for (long i = 0; i < nedge; ++i) {
    if (!r.next(tokens)) fail("missing edge row in section EDGES", r.line());
    if (tokens.size() != 4) fail("edge row needs 4 columns (a b bandwidth power)", r.line());
    EdgeSpec e;
    e.a = static_cast<SwitchId>(parse_long(tokens[0], r));
    e.b = static_cast<SwitchId>(parse_long(tokens[1], r));
    e.bandwidth = parse_num(tokens[2], r);
    e.power_cost = parse_num(tokens[3], r);
    t.edges.push_back(e);
  }

  tokens = expect_section(r, "HOSTS", 2);
  const long nhost = parse_long(tokens[1], r);
  for (long i = 0; i < nhost; ++i) {
    if (!r.next(tokens)) fail("missing host row in section HOSTS", r.line());
    if (tokens.size() != 4) fail("host row needs 4 columns (id switch ingress egress)", r.line());
    const HostId h = static_cast<HostId>(parse_long(tokens[0], r));
    const SwitchId sw = static_cast<SwitchId>(parse_long(tokens[1], r));
    if (parse_long(tokens[2], r)) t.ingress_hosts[h] = sw;
    if (parse_long(tokens[3], r)) t.egress_hosts[h] = sw;
  }

  tokens = expect_section(r, "FLOWS", 2);
  const long nflow = parse_long(tokens[1], r);
  for (long i = 0; i < nflow; ++i) {
    if (!r.next(tokens)) fail("missing flow row in section FLOWS", r.line());
    if (tokens.size() != 4) fail("flow row needs 4 columns (id src dst rate)", r.line());
    Flow f;
    f.id = static_cast<FlowId>(parse_long(tokens[0], r));
    f.source = static_cast<SwitchId>(parse_long(tokens[1], r));
    f.destination = static_cast<SwitchId>(parse_long(tokens[2], r));
    f.rate = parse_num(tokens[3], r);
    inst.flows.push_back(f);
  }

  if (r.next(tokens)) {
    if (tokens[0] != "PLACEMENT") fail("unexpected content after FLOWS: '" + tokens[0] + "'", r.line());
    PlacementInstance p;
    tokens = expect_section(r, "RESOURCES", 2);
    const long nres = parse_long(tokens[1], r);
    if (static_cast<long>(tokens.size()) != 2 + nres) {
      fail("RESOURCES header must list each resource name", r.line());
    }
    for (long i = 0; i < nres; ++i) p.resource_names.push_back(tokens[2 + i]);
    tokens = expect_section(r, "PMS", 2);
    const long npm = parse_long(tokens[1], r);
    p.pm_resources = read_matrix(r, npm, nres, "PMS");
    tokens = expect_section(r, "VMS", 2);
    const long nvm = parse_long(tokens[1], r);
    p.vm_demands = read_matrix(r, nvm, nres, "VMS");
    expect_section(r, "TRAFFIC", 1);
    p.vm_traffic = read_matrix(r, nvm, nvm, "TRAFFIC");
    expect_section(r, "HOPS", 1);
    p.pm_hops = read_matrix(r, npm, npm, "HOPS");
    inst.placement = std::move(p);
    if (r.next(tokens)) fail("unexpected content after HOPS: '" + tokens[0] + "'", r.line());
  }
  return inst;
}

Instance parse_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void write_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << write_instance(inst);
}

// --------------------------------------------------------------------------
// SNDLib plain-text subset.

namespace {

// Tokenizer treating '(' and ')' as standalone tokens.
std::vector<std::pair<std::string, int>> sndlib_tokens(std::string_view text) {
  std::vector<std::pair<std::string, int>> out;
  int line = 1;
  std::string cur;
  auto flush = [&]() {
    if (!cur.empty()) {
      out.push_back({cur, line});
      cur.clear();
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      flush();
      ++line;
    } else if (c == '#') {
      flush();
      while (i < text.size() && text[i] != '\n') ++i;
      ++line;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == '(' || c == ')') {
      flush();
      out.push_back({std::string(1, c), line});
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

}  // namespace

Instance import_sndlib(std::string_view text, const SndlibDefaults& defaults) {
  if (!(defaults.switch_watts > 0) || !(defaults.link_watts > 0)) {
    throw std::invalid_argument("SNDLib import needs explicit positive power defaults");
  }
  if (defaults.rule_capacity < 1) {
    throw std::invalid_argument("SNDLib import needs rule capacity >= 1");
  }
  auto tokens = sndlib_tokens(text);
  std::size_t i = 0;
  auto have = [&]() { return i < tokens.size(); };
  auto peek = [&]() -> const std::string& { return tokens[i].first; };
  auto take = [&]() -> std::string {
    if (!have()) throw ParseError("unexpected end of SNDLib file", tokens.empty() ? 0 : tokens.back().second);
    return tokens[i++].first;
  };
  auto expect = [&](const std::string& what) {
    std::string tok = take();
    if (tok != what) {
      throw ParseError("expected '" + what + "', got '" + tok + "'", tokens[i - 1].second);
    }
  };
  auto number = [&]() {
    std::string tok = take();
    double v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size()) {
      throw ParseError("expected number, got '" + tok + "'", tokens[i - 1].second);
    }
    return v;
  };

  Instance inst;
  std::map<std::string, SwitchId> node_ids;
  bool saw_nodes = false, saw_links = false;

  while (have()) {
    std::string section = take();
    if (section == "NODES") {
      saw_nodes = true;
      expect("(");
      while (have() && peek() != ")") {
        std::string name = take();
        if (have() && peek() == "(") {  // optional coordinates
          take();
          while (have() && peek() != ")") take();
          expect(")");
        }
        SwitchSpec s;
        s.id = static_cast<SwitchId>(inst.topology.switches.size());
        s.power_cost = defaults.switch_watts;
        s.rule_capacity = defaults.rule_capacity;
        node_ids[name] = s.id;
        inst.topology.switches.push_back(s);
        inst.topology.ingress_hosts[s.id] = s.id;
        inst.topology.egress_hosts[s.id] = s.id;
      }
      expect(")");
    } else if (section == "LINKS") {
      saw_links = true;
      expect("(");
      while (have() && peek() != ")") {
        take();  // link id
        expect("(");
        std::string src = take();
        std::string dst = take();
        expect(")");
        auto is_node = [&](const std::string& n) { return node_ids.count(n) > 0; };
        if (!is_node(src) || !is_node(dst)) {
          throw ParseError("link references unknown node '" + src + "'/'" + dst + "'",
                           tokens[i - 1].second);
        }
        const double pre_cap = number();
        number();  // pre-installed cost
        number();  // routing cost
        number();  // setup cost
        double capacity = pre_cap;
        if (have() && peek() == "(") {
          take();
          bool first = true;
          while (have() && peek() != ")") {
            const double module_cap = number();
            number();  // module cost
            if (first) {
              capacity = module_cap;
              first = false;
            }
          }
          expect(")");
        }
        if (!(capacity > 0)) {
          throw ParseError("link has no positive capacity (pre-installed or module)",
                           tokens[i - 1].second);
        }
        EdgeSpec e;
        e.a = std::min(node_ids[src], node_ids[dst]);
        e.b = std::max(node_ids[src], node_ids[dst]);
        e.bandwidth = capacity;
        e.power_cost = defaults.link_watts;
        inst.topology.edges.push_back(e);
      }
      expect(")");
    } else if (section == "DEMANDS") {
      expect("(");
      while (have() && peek() != ")") {
        take();  // demand id
        expect("(");
        std::string src = take();
        std::string dst = take();
        expect(")");
        number();  // routing unit
        const double value = number();
        take();    // max path length (number or UNLIMITED)
        if (!node_ids.count(src) || !node_ids.count(dst)) {
          throw ParseError("demand references unknown node", tokens[i - 1].second);
        }
        if (src == dst) {
          throw ParseError("demand source equals destination", tokens[i - 1].second);
        }
        Flow f;
        f.id = static_cast<FlowId>(inst.flows.size());
        f.source = node_ids[src];
        f.destination = node_ids[dst];
        f.rate = value;
        inst.flows.push_back(f);
      }
      expect(")");
    } else if (section == "META" || section == "?SNDlib" || section == "ADMISSIBLE_PATHS") {
      // Skip a balanced block if one follows.
      if (have() && peek() == "(") {
        int depth = 0;
        do {
          std::string tok = take();
          if (tok == "(") ++depth;
          if (tok == ")") --depth;
        } while (have() && depth > 0);
      }
    } else {
      // Unknown top-level word (version banners etc.); skip its block if any.
      if (have() && peek() == "(") {
        int depth = 0;
        do {
          std::string tok = take();
          if (tok == "(") ++depth;
          if (tok == ")") --depth;
        } while (have() && depth > 0);
      }
    }
  }
  if (!saw_nodes || !saw_links) {
    throw ParseError("SNDLib file must contain NODES and LINKS sections", 0);
  }
  std::sort(inst.topology.edges.begin(), inst.topology.edges.end(),
            [](const EdgeSpec& x, const EdgeSpec& y) {
              return std::pair{x.a, x.b} < std::pair{y.a, y.b};
            });
  return inst;
}

Instance import_sndlib_file(const std::string& path, const SndlibDefaults& defaults) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open SNDLib file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return import_sndlib(buf.str(), defaults);
}

std::string instance_digest(const Instance& inst) {
  const std::string bytes = write_instance(inst);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = (15); i >= 0; --i) {
    buf[i] = hex[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string("fnv1a64:") + buf;
}

}  // namespace sdnopt
