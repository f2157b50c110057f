#pragma once

// Maximum-weight (not maximum-cardinality) matching on a general graph
// with the O(n^3) primal-dual blossom method. Weights must be integral;
// dual variables are kept doubled so every quantity stays integral.

#include <algorithm>
#include <cassert>
#include <vector>

namespace ocs::detail {

template <typename W>
struct WeightedEdge {
  int u;
  int v;
  W w;
};

template <typename W>
class Blossom {
 public:
  Blossom(int vertices, std::vector<WeightedEdge<W>> edges)
      : nv_(vertices), edges_(std::move(edges)) {}

  /// Returns mate[v] (or -1) for every vertex.
  std::vector<int> solve();

 private:
  static int wrap(const std::vector<int>& v, int i) { return v[static_cast<std::size_t>(i < 0 ? i + int(v.size()) : i)]; }

  W slack(int k) const { return dual_[edges_[k].u] + dual_[edges_[k].v] - 2 * edges_[k].w; }
  void leaves(int b, std::vector<int>& out) const;
  void assign_label(int w, int t, int p);
  int scan_blossom(int v, int w);
  void add_blossom(int base, int k);
  void expand_blossom(int b, bool endstage);
  void augment_blossom(int b, int v);
  void augment_matching(int k);

  int nv_;
  std::vector<WeightedEdge<W>> edges_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_, label_, labelend_, inblossom_, blossomparent_, blossombase_, bestedge_;
  std::vector<std::vector<int>> blossomchilds_, blossomendps_, blossombestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<int> unused_;
  std::vector<W> dual_;
  std::vector<bool> allowedge_;
  std::vector<int> queue_;
};

template <typename W>
void Blossom<W>::leaves(int b, std::vector<int>& out) const {
  if (b < nv_) {
    out.push_back(b);
    return;
  }
  for (int t : blossomchilds_[b]) leaves(t, out);
}

template <typename W>
void Blossom<W>::assign_label(int w, int t, int p) {
  int b = inblossom_[w];
  assert(label_[w] == 0 && label_[b] == 0);
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    leaves(b, queue_);
  } else if (t == 2) {
    int base = blossombase_[b];
    assert(mate_[base] >= 0);
    assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
  }
}

template <typename W>
int Blossom<W>::scan_blossom(int v, int w) {
  std::vector<int> path;
  int base = -1;
  while (v != -1 || w != -1) {
    int b = inblossom_[v];
    if (label_[b] & 4) {
      base = blossombase_[b];
      break;
    }
    assert(label_[b] == 1);
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint_[labelend_[b]];
      b = inblossom_[v];
      assert(label_[b] == 2);
      v = endpoint_[labelend_[b]];
    }
    if (w != -1) std::swap(v, w);
  }
  for (int b : path) label_[b] = 1;
  return base;
}

template <typename W>
void Blossom<W>::add_blossom(int base, int k) {
  int v = edges_[k].u, w = edges_[k].v;
  int bb = inblossom_[base], bv = inblossom_[v], bw = inblossom_[w];
  int b = unused_.back();
  unused_.pop_back();
  blossombase_[b] = base;
  blossomparent_[b] = -1;
  blossomparent_[bb] = b;
  auto& path = blossomchilds_[b];
  auto& endps = blossomendps_[b];
  path.clear();
  endps.clear();
  while (bv != bb) {
    blossomparent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint_[labelend_[bv]];
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    blossomparent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint_[labelend_[bw]];
    bw = inblossom_[w];
  }
  assert(label_[bb] == 1);
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dual_[b] = 0;
  std::vector<int> lv;
  leaves(b, lv);
  for (int x : lv) {
    if (label_[inblossom_[x]] == 2) queue_.push_back(x);
    inblossom_[x] = b;
  }
  std::vector<int> bestedgeto(static_cast<std::size_t>(2 * nv_), -1);
  for (int sub : path) {
    std::vector<int> candidates;
    if (!has_bestedges_[sub]) {
      std::vector<int> sl;
      leaves(sub, sl);
      for (int x : sl)
        for (int p : neighbend_[x]) candidates.push_back(p / 2);
    } else {
      candidates = blossombestedges_[sub];
    }
    for (int kk : candidates) {
      int i = edges_[kk].u, j = edges_[kk].v;
      if (inblossom_[j] == b) std::swap(i, j);
      int bj = inblossom_[j];
      if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
        bestedgeto[bj] = kk;
    }
    blossombestedges_[sub].clear();
    has_bestedges_[sub] = false;
    bestedge_[sub] = -1;
  }
  blossombestedges_[b].clear();
  for (int kk : bestedgeto)
    if (kk != -1) blossombestedges_[b].push_back(kk);
  has_bestedges_[b] = true;
  bestedge_[b] = -1;
  for (int kk : blossombestedges_[b])
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
}

template <typename W>
void Blossom<W>::expand_blossom(int b, bool endstage) {
  const std::vector<int> childs = blossomchilds_[b];
  for (int s : childs) {
    blossomparent_[s] = -1;
    if (s < nv_) {
      inblossom_[s] = s;
    } else if (endstage && dual_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      std::vector<int> sl;
      leaves(s, sl);
      for (int x : sl) inblossom_[x] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    const auto& endps = blossomendps_[b];
    int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
    int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
    int jstep, endptrick;
    if (j & 1) {
      j -= static_cast<int>(childs.size());
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    int p = labelend_[b];
    while (j != 0) {
      label_[endpoint_[p ^ 1]] = 0;
      label_[endpoint_[wrap(endps, j - endptrick) ^ endptrick ^ 1]] = 0;
      assign_label(endpoint_[p ^ 1], 2, p);
      allowedge_[wrap(endps, j - endptrick) / 2] = true;
      j += jstep;
      p = wrap(endps, j - endptrick) ^ endptrick;
      allowedge_[p / 2] = true;
      j += jstep;
    }
    int bv = wrap(childs, j);
    label_[endpoint_[p ^ 1]] = label_[bv] = 2;
    labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (wrap(childs, j) != entrychild) {
      bv = wrap(childs, j);
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      std::vector<int> sl;
      leaves(bv, sl);
      auto it = std::find_if(sl.begin(), sl.end(), [&](int x) { return label_[x] != 0; });
      if (it != sl.end()) {
        int x = *it;
        assert(label_[x] == 2 && inblossom_[x] == bv);
        label_[x] = 0;
        label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
        assign_label(x, 2, labelend_[x]);
      }
      j += jstep;
    }
  }
  label_[b] = labelend_[b] = -1;
  blossomchilds_[b].clear();
  blossomendps_[b].clear();
  blossombase_[b] = -1;
  blossombestedges_[b].clear();
  has_bestedges_[b] = false;
  bestedge_[b] = -1;
  unused_.push_back(b);
}

template <typename W>
void Blossom<W>::augment_blossom(int b, int v) {
  int t = v;
  while (blossomparent_[t] != b) t = blossomparent_[t];
  if (t >= nv_) augment_blossom(t, v);
  auto& childs = blossomchilds_[b];
  auto& endps = blossomendps_[b];
  int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
  int j = i, jstep, endptrick;
  if (i & 1) {
    j -= static_cast<int>(childs.size());
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = wrap(childs, j);
    int p = wrap(endps, j - endptrick) ^ endptrick;
    if (t >= nv_) augment_blossom(t, endpoint_[p]);
    j += jstep;
    t = wrap(childs, j);
    if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
    mate_[endpoint_[p]] = p ^ 1;
    mate_[endpoint_[p ^ 1]] = p;
  }
  std::rotate(childs.begin(), childs.begin() + i, childs.end());
  std::rotate(endps.begin(), endps.begin() + i, endps.end());
  blossombase_[b] = blossombase_[childs[0]];
  assert(blossombase_[b] == v);
}

template <typename W>
void Blossom<W>::augment_matching(int k) {
  const int ends[2][2] = {{edges_[k].u, 2 * k + 1}, {edges_[k].v, 2 * k}};
  for (const auto& e : ends) {
    int s = e[0], p = e[1];
    while (true) {
      int bs = inblossom_[s];
      assert(label_[bs] == 1);
      if (bs >= nv_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      int t = endpoint_[labelend_[bs]];
      int bt = inblossom_[t];
      assert(label_[bt] == 2);
      s = endpoint_[labelend_[bt]];
      int j = endpoint_[labelend_[bt] ^ 1];
      assert(blossombase_[bt] == t);
      if (bt >= nv_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

template <typename W>
std::vector<int> Blossom<W>::solve() {
  const int n = nv_;
  mate_.assign(static_cast<std::size_t>(n), -1);
  if (edges_.empty() || n == 0) return mate_;
  const int ne = static_cast<int>(edges_.size());
  W maxweight = 0;
  for (const auto& e : edges_) maxweight = std::max(maxweight, e.w);

  endpoint_.resize(static_cast<std::size_t>(2 * ne));
  neighbend_.assign(static_cast<std::size_t>(n), {});
  for (int k = 0; k < ne; ++k) {
    endpoint_[2 * k] = edges_[k].u;
    endpoint_[2 * k + 1] = edges_[k].v;
    neighbend_[edges_[k].u].push_back(2 * k + 1);
    neighbend_[edges_[k].v].push_back(2 * k);
  }
  const auto n2 = static_cast<std::size_t>(2 * n);
  label_.assign(n2, 0);
  labelend_.assign(n2, -1);
  inblossom_.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) inblossom_[v] = v;
  blossomparent_.assign(n2, -1);
  blossomchilds_.assign(n2, {});
  blossomendps_.assign(n2, {});
  blossombase_.assign(n2, -1);
  for (int v = 0; v < n; ++v) blossombase_[v] = v;
  bestedge_.assign(n2, -1);
  blossombestedges_.assign(n2, {});
  has_bestedges_.assign(n2, false);
  unused_.clear();
  for (int b = n; b < 2 * n; ++b) unused_.push_back(b);
  dual_.assign(n2, W{0});
  for (int v = 0; v < n; ++v) dual_[v] = maxweight;
  allowedge_.assign(static_cast<std::size_t>(ne), false);
  queue_.clear();

  for (int stage = 0; stage < n; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (int b = n; b < 2 * n; ++b) {
      blossombestedges_[b].clear();
      has_bestedges_[b] = false;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), false);
    queue_.clear();
    for (int v = 0; v < n; ++v)
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        int v = queue_.back();
        queue_.pop_back();
        assert(label_[inblossom_[v]] == 1);
        for (int p : neighbend_[v]) {
          int k = p / 2;
          int w = endpoint_[p];
          if (inblossom_[v] == inblossom_[w]) continue;
          W kslack{};
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = true;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            int b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = 1;
      W delta = *std::min_element(dual_.begin(), dual_.begin() + n);
      int deltaedge = -1, deltablossom = -1;
      for (int v = 0; v < n; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          W d = slack(bestedge_[v]);
          if (d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (int b = 0; b < 2 * n; ++b) {
        if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          W ks = slack(bestedge_[b]);
          assert(ks % 2 == 0);
          W d = ks / 2;
          if (d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (int b = n; b < 2 * n; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 && dual_[b] < delta) {
          delta = dual_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }
      for (int v = 0; v < n; ++v) {
        if (label_[inblossom_[v]] == 1)
          dual_[v] -= delta;
        else if (label_[inblossom_[v]] == 2)
          dual_[v] += delta;
      }
      for (int b = n; b < 2 * n; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
          if (label_[b] == 1)
            dual_[b] += delta;
          else if (label_[b] == 2)
            dual_[b] -= delta;
        }
      }
      if (deltatype == 1) {
        break;
      } else if (deltatype == 2) {
        allowedge_[deltaedge] = true;
        int i = edges_[deltaedge].u, j = edges_[deltaedge].v;
        if (label_[inblossom_[i]] == 0) std::swap(i, j);
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = true;
        queue_.push_back(edges_[deltaedge].u);
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (int b = n; b < 2 * n; ++b)
      if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) expand_blossom(b, true);
  }

  std::vector<int> result(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v)
    if (mate_[v] >= 0) result[v] = endpoint_[mate_[v]];
  return result;
}

}  // namespace ocs::detail
