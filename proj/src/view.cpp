#include "setlocal/view.hpp"

#include <algorithm>

#include "setlocal/error.hpp"

namespace setlocal {

namespace {

constexpr char kSetTag = 'S';
constexpr char kMultisetTag = 'M';
constexpr char kLeafTag = 0x00;
constexpr char kNodeTag = 0x01;

void put_u32(std::string& out, std::uint32_t x) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((x >> shift) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t x) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((x >> shift) & 0xFF));
}

char kind_tag(Semantics kind) { return kind == Semantics::Set ? kSetTag : kMultisetTag; }

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint8_t byte() {
    need(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x = (x << 8) | static_cast<std::uint8_t>(bytes_[pos_++]);
    return x;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x = (x << 8) | static_cast<std::uint8_t>(bytes_[pos_++]);
    return x;
  }
  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t k) const {
    if (bytes_.size() - pos_ < k) throw InvalidArgument("truncated view encoding");
  }
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

View decode_body(Reader& in, Semantics kind) {
  const std::uint8_t tag = in.byte();
  if (tag == kLeafTag) return View::leaf(kind, in.u64());
  if (tag != kNodeTag) throw InvalidArgument("unknown view tag");
  const std::uint32_t depth = in.u32();
  const std::uint64_t inner_len = in.u64();
  const std::size_t inner_start = in.pos();
  View inner = decode_body(in, kind);
  if (in.pos() - inner_start != inner_len) throw InvalidArgument("inner length mismatch");
  const std::uint32_t count = in.u32();
  std::vector<View::Child> children;
  children.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint64_t len = in.u64();
    const std::size_t start = in.pos();
    View child = decode_body(in, kind);
    if (in.pos() - start != len) throw InvalidArgument("child length mismatch");
    const std::uint32_t mult = kind == Semantics::Multiset ? in.u32() : 1;
    children.emplace_back(std::move(child), mult);
  }
  View v = View::node_counted(std::move(inner), std::move(children));
  if (v.depth() != depth) throw InvalidArgument("depth field mismatch");
  return v;
}

}  // namespace

const char* to_string(Semantics s) { return s == Semantics::Set ? "set" : "multiset"; }

Semantics semantics_from_string(const std::string& s) {
  if (s == "set") return Semantics::Set;
  if (s == "multiset") return Semantics::Multiset;
  throw InvalidArgument("unknown semantics '" + s + "'");
}

View View::leaf(Semantics kind, Color color) {
  auto rep = std::make_shared<ViewRep>();
  rep->kind = kind;
  rep->depth = 0;
  rep->base = color;
  rep->child_total = 0;
  rep->encoding.push_back(kind_tag(kind));
  rep->encoding.push_back(kLeafTag);
  put_u64(rep->encoding, color);
  return View(std::move(rep));
}

View View::node(View inner, std::vector<View> children) {
  std::vector<Child> counted;
  counted.reserve(children.size());
  for (auto& c : children) counted.emplace_back(std::move(c), 1);
  return node_counted(std::move(inner), std::move(counted));
}

View View::node_counted(View inner, std::vector<Child> children) {
  const Semantics kind = inner.kind();
  const std::uint32_t child_depth = inner.depth();
  for (const auto& [c, mult] : children) {
    if (c.kind() != kind) throw InvalidArgument("child view has a different kind");
    if (c.depth() != child_depth) throw InvalidArgument("child view depth must equal inner depth");
    if (mult == 0) throw InvalidArgument("zero multiplicity");
  }
  std::sort(children.begin(), children.end(),
            [](const Child& a, const Child& b) { return a.first.encoding() < b.first.encoding(); });
  // Merge equal children: SET keeps one, MULTISET adds counts.
  std::vector<Child> merged;
  merged.reserve(children.size());
  for (auto& child : children) {
    if (!merged.empty() && merged.back().first == child.first) {
      if (kind == Semantics::Multiset) merged.back().second += child.second;
    } else {
      if (kind == Semantics::Set) child.second = 1;
      merged.push_back(std::move(child));
    }
  }

  auto rep = std::make_shared<ViewRep>();
  rep->kind = kind;
  rep->depth = child_depth + 1;
  rep->base = 0;
  rep->child_total = 0;
  std::string& enc = rep->encoding;
  enc.push_back(kind_tag(kind));
  enc.push_back(kNodeTag);
  put_u32(enc, rep->depth);
  const std::string_view inner_body = inner.body();
  put_u64(enc, inner_body.size());
  enc.append(inner_body);
  put_u32(enc, static_cast<std::uint32_t>(merged.size()));
  for (const auto& [c, mult] : merged) {
    const std::string_view b = c.body();
    put_u64(enc, b.size());
    enc.append(b);
    if (kind == Semantics::Multiset) put_u32(enc, mult);
    rep->child_total += mult;
  }
  rep->inner = std::move(inner);
  rep->children = std::move(merged);
  return View(std::move(rep));
}

Semantics View::kind() const noexcept { return rep_->kind; }
std::uint32_t View::depth() const noexcept { return rep_->depth; }

Color View::base_color() const {
  if (rep_->depth != 0) throw InvalidArgument("base color is only defined for 0-round views");
  return rep_->base;
}

const View& View::inner() const {
  if (rep_->depth == 0) throw InvalidArgument("0-round views have no inner view");
  return *rep_->inner;
}

std::span<const View::Child> View::children() const noexcept { return rep_->children; }
std::size_t View::child_total() const noexcept { return rep_->child_total; }
const std::string& View::encoding() const noexcept { return rep_->encoding; }
std::string_view View::body() const noexcept { return std::string_view(rep_->encoding).substr(1); }

std::uint32_t View::child_count(const View& v) const {
  const auto& kids = rep_->children;
  auto it = std::lower_bound(kids.begin(), kids.end(), v,
                             [](const Child& c, const View& x) { return c.first.encoding() < x.encoding(); });
  return (it != kids.end() && it->first == v) ? it->second : 0;
}

bool View::has_child(const View& v) const { return child_count(v) > 0; }

std::string canonical_encode(const View& v) { return v.encoding(); }

View decode_view(std::string_view bytes) {
  if (bytes.empty()) throw InvalidArgument("empty view encoding");
  Semantics kind;
  if (bytes[0] == kSetTag) {
    kind = Semantics::Set;
  } else if (bytes[0] == kMultisetTag) {
    kind = Semantics::Multiset;
  } else {
    throw InvalidArgument("unknown view kind byte");
  }
  Reader in(bytes.substr(1));
  View v = decode_body(in, kind);
  if (!in.done()) throw InvalidArgument("trailing bytes after view encoding");
  if (v.encoding() != bytes) throw InvalidArgument("view encoding is not canonical");
  return v;
}

View truncate(const View& v, std::uint32_t depth) {
  if (depth > v.depth()) {
    throw InvalidArgument("cannot truncate a " + std::to_string(v.depth()) + "-round view to depth " +
                          std::to_string(depth));
  }
  const View* cur = &v;
  while (cur->depth() > depth) cur = &cur->inner();
  return *cur;
}

View erase_multiplicities(const View& v) {
  if (v.depth() == 0) return View::leaf(Semantics::Set, v.base_color());
  std::vector<View> kids;
  kids.reserve(v.children().size());
  for (const auto& [c, mult] : v.children()) kids.push_back(erase_multiplicities(c));
  return View::node(erase_multiplicities(v.inner()), std::move(kids));
}

std::vector<View> extract_all_views(const ColoredGraph& g, std::uint32_t r, Semantics kind) {
  std::vector<View> level;
  level.reserve(g.size());
  for (NodeId v = 0; v < g.size(); ++v) level.push_back(View::leaf(kind, g.psi(v)));
  for (std::uint32_t round = 0; round < r; ++round) {
    std::vector<View> next;
    next.reserve(g.size());
    for (NodeId v = 0; v < g.size(); ++v) {
      std::vector<View> kids;
      kids.reserve(g.graph().degree(v));
      for (NodeId u : g.graph().neighbors(v)) kids.push_back(level[u]);
      next.push_back(View::node(level[v], std::move(kids)));
    }
    level = std::move(next);
  }
  return level;
}

View extract_view(const ColoredGraph& g, NodeId v, std::uint32_t r, Semantics kind) {
  if (v >= g.size()) throw InvalidArgument("node out of range");
  return extract_all_views(g, r, kind)[v];
}

std::optional<View> center(const View& v) {
  if (v.depth() == 0) return std::nullopt;
  return v.inner();
}

std::vector<std::optional<View>> types(const View& v) {
  if (v.depth() == 0) return {std::nullopt};
  std::vector<std::optional<View>> out;
  out.reserve(v.children().size());
  for (const auto& [c, mult] : v.children()) out.emplace_back(c);
  return out;
}

std::vector<std::optional<View>> centers_of(std::span<const View> a) {
  std::vector<std::optional<View>> out;
  out.reserve(a.size());
  for (const View& x : a) out.push_back(center(x));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

nlohmann::json to_json(const View& v) {
  if (v.depth() == 0) return v.base_color();
  nlohmann::json kids = nlohmann::json::array();
  for (const auto& [c, mult] : v.children()) {
    if (v.kind() == Semantics::Multiset) {
      kids.push_back(nlohmann::json::array({to_json(c), mult}));
    } else {
      kids.push_back(to_json(c));
    }
  }
  return {{"inner", to_json(v.inner())}, {"children", std::move(kids)}};
}

View view_from_json(const nlohmann::json& j, Semantics kind) {
  try {
    if (j.is_number_integer()) {
      const auto c = j.get<std::int64_t>();
      if (c < 1) throw InvalidArgument("colors are positive");
      return View::leaf(kind, static_cast<Color>(c));
    }
    View inner = view_from_json(j.at("inner"), kind);
    std::vector<View::Child> kids;
    for (const auto& c : j.at("children")) {
      if (kind == Semantics::Multiset) {
        kids.emplace_back(view_from_json(c.at(0), kind), c.at(1).get<std::uint32_t>());
      } else {
        kids.emplace_back(view_from_json(c, kind), 1);
      }
    }
    return View::node_counted(std::move(inner), std::move(kids));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed view JSON: ") + e.what());
  }
}

std::string to_hex(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

ViewInterner::Id ViewInterner::intern(std::vector<std::uint64_t> key) {
  auto [it, inserted] = table_.try_emplace(std::move(key), static_cast<Id>(table_.size()));
  return it->second;
}

std::vector<ViewInterner::Id> ViewInterner::intern_graph(const ColoredGraph& g, std::uint32_t r, Semantics kind) {
  const std::uint64_t kind_word = kind == Semantics::Set ? 0 : 1;
  std::vector<Id> level(g.size());
  for (NodeId v = 0; v < g.size(); ++v) level[v] = intern({kind_word, 0, g.psi(v)});
  std::vector<std::uint64_t> kids;
  for (std::uint32_t depth = 1; depth <= r; ++depth) {
    std::vector<Id> next(g.size());
    for (NodeId v = 0; v < g.size(); ++v) {
      kids.clear();
      for (NodeId u : g.graph().neighbors(v)) kids.push_back(level[u]);
      std::sort(kids.begin(), kids.end());
      std::vector<std::uint64_t> key{kind_word, depth, level[v]};
      for (std::size_t i = 0; i < kids.size();) {
        std::size_t j = i;
        while (j < kids.size() && kids[j] == kids[i]) ++j;
        key.push_back(kids[i]);
        key.push_back(kind == Semantics::Set ? 1 : j - i);
        i = j;
      }
      next[v] = intern(std::move(key));
    }
    level = std::move(next);
  }
  return level;
}

}  // namespace setlocal
