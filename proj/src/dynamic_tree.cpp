#include "gts/dynamic_tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace gts {

namespace {

using PathInfo = DynamicForest::PathInfo;

bool better(double a, int ia, double b, int ib) { return ib < 0 || (ia >= 0 && (a < b || (a == b && ia < ib))); }

void take_edge(PathInfo& s, int e, double g, double len) {
  // an edge at zero blocks both directions
  if (g >= 0 && better(g, e, s.min_pos, s.arg_pos)) s.min_pos = g, s.arg_pos = e;
  if (g <= 0 && better(-g, e, s.min_neg, s.arg_neg)) s.min_neg = -g, s.arg_neg = e;
  if (g > 0) s.pos_len += len;
  if (g < 0) s.neg_len += len;
}

void combine(PathInfo& s, const PathInfo& t) {
  s.pos_len += t.pos_len;
  s.neg_len += t.neg_len;
  if (t.arg_pos >= 0 && better(t.min_pos, t.arg_pos, s.min_pos, s.arg_pos)) s.min_pos = t.min_pos, s.arg_pos = t.arg_pos;
  if (t.arg_neg >= 0 && better(t.min_neg, t.arg_neg, s.min_neg, s.arg_neg)) s.min_neg = t.min_neg, s.arg_neg = t.arg_neg;
}

class LinkCut : public DynamicForest {
 public:
  LinkCut(int nv, int ne) : nv_(nv), t_(nv + ne), ends_(ne, {-1, -1}) {}

  bool connected(int u, int v) override { return u == v || find_root(u) == find_root(v); }

  void link(int e, int u, int v, double flow_uv, double length) override {
    const int x = nv_ + e;
    Node& n = t_[x];
    n = Node{};
    n.edge = e;
    n.len = length;
    n.g = -flow_uv;  // x hangs below v, so its flow is counted from v toward u
    pull(x);
    ends_[e] = {u, v};
    t_[x].p = v;
    make_root(u);
    t_[u].p = x;
  }

  void cut(int e) override {
    const int x = nv_ + e;
    cut_pair(ends_[e].first, x);
    cut_pair(x, ends_[e].second);
    ends_[e] = {-1, -1};
  }

  PathInfo path(int u, int v) override {
    expose(u, v);
    return t_[v].agg;
  }

  void add_path(int u, int v, double delta) override {
    expose(u, v);
    apply_add(v, delta);
    settle(v);
  }

  double flow(int e, int from) override {
    const int x = nv_ + e;
    make_root(from);
    access(x);
    splay(x);
    return t_[x].g;
  }

 private:
  struct Node {
    int ch[2] = {-1, -1};
    int p = -1;
    bool flip = false;
    double add = 0;
    int edge = -1;
    double g = 0, len = 0;
    PathInfo agg;
  };

  bool is_root(int x) const {
    const int p = t_[x].p;
    return p < 0 || (t_[p].ch[0] != x && t_[p].ch[1] != x);
  }

  void pull(int x) {
    Node& n = t_[x];
    PathInfo s;
    if (n.ch[0] >= 0) s = t_[n.ch[0]].agg;
    if (n.edge >= 0) take_edge(s, n.edge, n.g, n.len);
    if (n.ch[1] >= 0) combine(s, t_[n.ch[1]].agg);
    n.agg = s;
  }

  void apply_flip(int x) {
    if (x < 0) return;
    Node& n = t_[x];
    std::swap(n.ch[0], n.ch[1]);
    n.g = -n.g;
    std::swap(n.agg.pos_len, n.agg.neg_len);
    std::swap(n.agg.min_pos, n.agg.min_neg);
    std::swap(n.agg.arg_pos, n.agg.arg_neg);
    n.add = -n.add;
    n.flip = !n.flip;
  }

  void apply_add(int x, double d) {
    if (x < 0 || d == 0) return;
    Node& n = t_[x];
    if (n.edge >= 0) n.g += d;
    if (n.agg.arg_pos >= 0) n.agg.min_pos += d;
    if (n.agg.arg_neg >= 0) n.agg.min_neg -= d;
    n.add += d;
  }

  // edges that reached zero now block both ways; rebuild the aggregates above them
  void settle(int x) {
    if (x < 0) return;
    const PathInfo& a = t_[x].agg;
    if (!((a.arg_pos >= 0 && a.min_pos == 0) || (a.arg_neg >= 0 && a.min_neg == 0))) return;
    push(x);
    settle(t_[x].ch[0]);
    settle(t_[x].ch[1]);
    pull(x);
  }

  void push(int x) {
    Node& n = t_[x];
    if (n.flip) {
      apply_flip(n.ch[0]);
      apply_flip(n.ch[1]);
      n.flip = false;
    }
    if (n.add != 0) {
      apply_add(n.ch[0], n.add);
      apply_add(n.ch[1], n.add);
      n.add = 0;
    }
  }

  void rotate(int x) {
    const int p = t_[x].p, g = t_[p].p;
    const int dir = t_[p].ch[1] == x;
    const int b = t_[x].ch[!dir];
    if (!is_root(p)) t_[g].ch[t_[g].ch[1] == p] = x;
    t_[x].p = g;
    t_[x].ch[!dir] = p;
    t_[p].p = x;
    t_[p].ch[dir] = b;
    if (b >= 0) t_[b].p = p;
    pull(p);
    pull(x);
  }

  void splay(int x) {
    stack_.clear();
    for (int y = x;; y = t_[y].p) {
      stack_.push_back(y);
      if (is_root(y)) break;
    }
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) push(*it);
    while (!is_root(x)) {
      const int p = t_[x].p;
      if (!is_root(p)) {
        const int g = t_[p].p;
        rotate((t_[g].ch[1] == p) == (t_[p].ch[1] == x) ? p : x);
      }
      rotate(x);
    }
  }

  void access(int x) {
    int last = -1;
    for (int y = x; y >= 0; y = t_[y].p) {
      splay(y);
      t_[y].ch[1] = last;
      pull(y);
      last = y;
    }
    splay(x);
  }

  void make_root(int x) {
    access(x);
    apply_flip(x);
  }

  int find_root(int x) {
    access(x);
    while (true) {
      push(x);
      if (t_[x].ch[0] < 0) break;
      x = t_[x].ch[0];
    }
    splay(x);
    return x;
  }

  void expose(int u, int v) {
    make_root(u);
    access(v);
  }

  void cut_pair(int u, int v) {
    make_root(u);
    access(v);
    if (t_[v].ch[0] != u || t_[u].ch[1] >= 0) throw std::logic_error("link-cut forest: not an edge");
    t_[v].ch[0] = -1;
    t_[u].p = -1;
    pull(v);
  }

  int nv_;
  std::vector<Node> t_;
  std::vector<std::pair<int, int>> ends_;
  std::vector<int> stack_;
};

class Naive : public DynamicForest {
 public:
  Naive(int nv, int ne) : adj_(nv), a_(ne, -1), b_(ne, -1), f_(ne, 0), len_(ne, 0) {}

  bool connected(int u, int v) override { return u == v || !walk(u, v).empty(); }

  void link(int e, int u, int v, double flow_uv, double length) override {
    a_[e] = u, b_[e] = v, f_[e] = flow_uv, len_[e] = length;
    adj_[u].push_back(e);
    adj_[v].push_back(e);
  }

  void cut(int e) override {
    for (int x : {a_[e], b_[e]}) adj_[x].erase(std::find(adj_[x].begin(), adj_[x].end(), e));
    a_[e] = b_[e] = -1;
  }

  PathInfo path(int u, int v) override {
    PathInfo s;
    int at = u;
    for (int e : walk(u, v)) {
      take_edge(s, e, a_[e] == at ? f_[e] : -f_[e], len_[e]);
      at = a_[e] == at ? b_[e] : a_[e];
    }
    return s;
  }

  void add_path(int u, int v, double delta) override {
    int at = u;
    for (int e : walk(u, v)) {
      f_[e] += a_[e] == at ? delta : -delta;
      at = a_[e] == at ? b_[e] : a_[e];
    }
  }

  double flow(int e, int from) override { return a_[e] == from ? f_[e] : -f_[e]; }

 private:
  // edges from u to v in order, empty if not connected
  std::vector<int> walk(int u, int v) {
    std::vector<int> via(adj_.size(), -2);
    std::vector<int> stack{u};
    via[u] = -1;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      if (x == v) break;
      for (int e : adj_[x]) {
        const int y = a_[e] == x ? b_[e] : a_[e];
        if (via[y] == -2) via[y] = e, stack.push_back(y);
      }
    }
    std::vector<int> out;
    if (via[v] == -2) return out;
    for (int x = v; x != u;) {
      const int e = via[x];
      out.push_back(e);
      x = a_[e] == x ? b_[e] : a_[e];
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<int> a_, b_;
  std::vector<double> f_, len_;
};

}  // namespace

std::unique_ptr<DynamicForest> make_link_cut_forest(int num_vertices, int num_edges) {
  return std::make_unique<LinkCut>(num_vertices, num_edges);
}

std::unique_ptr<DynamicForest> make_naive_forest(int num_vertices, int num_edges) {
  return std::make_unique<Naive>(num_vertices, num_edges);
}

}  // namespace gts
