#include "treedecay/lattice.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace treedecay {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) throw std::domain_error(std::string(what) + ": dimension mismatch");
}

// Union-find with path halving.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<int> face_center(const Face& f) {
  std::vector<int> c(f.base.size());
  for (std::size_t b = 0; b < c.size(); ++b) c[b] = 2 * f.base[b];
  c[static_cast<std::size_t>(f.axis)] += 1;
  return c;
}

Face face_from_center(const std::vector<int>& c) {
  Face f;
  f.base = c;
  int odd = -1;
  for (std::size_t b = 0; b < c.size(); ++b) {
    if (c[b] % 2 != 0) odd = static_cast<int>(b);
  }
  f.axis = odd;
  f.base[static_cast<std::size_t>(odd)] -= 1;
  for (auto& x : f.base) x /= 2;
  return f;
}

}  // namespace

std::string to_string(const Site& s) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < s.coords.size(); ++i) {
    if (i) os << ',';
    os << s.coords[i];
  }
  os << ')';
  return os.str();
}

Site parse_site(std::string_view text) {
  std::string cleaned;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) cleaned.push_back(ch);
  }
  if (cleaned.size() < 2 || cleaned.front() != '(' || cleaned.back() != ')') {
    throw std::invalid_argument("site must look like (x1,...,xd): '" + std::string(text) + "'");
  }
  std::vector<int> coords;
  std::stringstream ss(cleaned.substr(1, cleaned.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw std::invalid_argument("bad coordinate '" + item + "' in site '" + std::string(text) + "'");
    }
    coords.push_back(v);
  }
  if (coords.empty()) throw std::invalid_argument("empty site");
  return Site(std::move(coords));
}

std::vector<Site> parse_site_list(std::string_view text) {
  std::vector<Site> out;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_site(item));
  }
  return out;
}

int manhattan(const Site& a, const Site& b) {
  require_same_dim(a.dim(), b.dim(), "manhattan");
  int d = 0;
  for (int k = 0; k < a.dim(); ++k) d += std::abs(a[k] - b[k]);
  return d;
}

std::string to_string(const Face& f) {
  std::ostringstream os;
  os << "[axis=" << f.axis << " base=" << to_string(Site(f.base)) << ']';
  return os.str();
}

Face face_between(const Site& a, const Site& b) {
  require_same_dim(a.dim(), b.dim(), "face_between");
  if (manhattan(a, b) != 1) throw std::domain_error("face_between: sites are not nearest neighbors");
  for (int k = 0; k < a.dim(); ++k) {
    if (a[k] != b[k]) return Face{k, a[k] < b[k] ? a.coords : b.coords};
  }
  throw std::logic_error("unreachable");
}

std::pair<Site, Site> cells_of(const Face& f) {
  Site lo(f.base);
  Site hi(f.base);
  hi.coords[static_cast<std::size_t>(f.axis)] += 1;
  return {lo, hi};
}

SortedSet<Face> set_union(const FaceSet& a, const FaceSet& b) {
  std::vector<Face> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FaceSet(std::move(out));
}

SortedSet<Face> set_intersection(const FaceSet& a, const FaceSet& b) {
  std::vector<Face> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FaceSet(std::move(out));
}

// ---------------------------------------------------------------------------
// Box

Box::Box(std::vector<int> interior_extent) : extent_(std::move(interior_extent)) {
  if (extent_.size() < 2) throw std::domain_error("Box: dimension must be at least 2");
  for (int e : extent_) {
    if (e < 0) throw std::domain_error("Box: negative extent");
  }
}

Box Box::parse(std::string_view text) {
  std::vector<int> ext;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, 'x')) {
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw std::invalid_argument("interior must look like 3x3 or 2x2x2: '" + s + "'");
    }
    ext.push_back(v);
  }
  return Box(std::move(ext));
}

std::size_t Box::interior_size() const {
  std::size_t n = 1;
  for (int e : extent_) n *= static_cast<std::size_t>(e);
  return n;
}

bool Box::is_interior(const Site& s) const {
  if (s.dim() != dim()) return false;
  for (int k = 0; k < dim(); ++k) {
    if (s[k] < 0 || s[k] >= extent_[static_cast<std::size_t>(k)]) return false;
  }
  return true;
}

bool Box::is_boundary(const Site& s) const {
  if (s.dim() != dim()) return false;
  int outside = 0;
  for (int k = 0; k < dim(); ++k) {
    const int e = extent_[static_cast<std::size_t>(k)];
    if (s[k] == -1 || s[k] == e) {
      ++outside;
    } else if (s[k] < -1 || s[k] > e) {
      return false;
    }
  }
  // Exactly one coordinate just outside and the site touches a nonempty interior.
  return outside == 1 && interior_size() > 0;
}

std::vector<Site> Box::interior_sites() const {
  std::vector<Site> out;
  const std::size_t total = interior_size();
  out.reserve(total);
  std::vector<int> c(extent_.size(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    out.emplace_back(c);
    for (int k = dim() - 1; k >= 0; --k) {
      auto kk = static_cast<std::size_t>(k);
      if (++c[kk] < extent_[kk]) break;
      c[kk] = 0;
    }
  }
  return out;
}

std::vector<Site> Box::boundary_sites() const {
  std::vector<Site> out;
  for (const Site& s : interior_sites()) {
    for (int k = 0; k < dim(); ++k) {
      for (int step : {-1, 1}) {
        Site t = s;
        t.coords[static_cast<std::size_t>(k)] += step;
        if (!is_interior(t)) out.push_back(t);
      }
    }
  }
  return SiteSet(std::move(out)).items();
}

std::string Box::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < extent_.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(extent_[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Set geometry

SiteSet neighbors(const Site& site, const Box& box) {
  if (!box.in_closure(site)) throw std::domain_error("neighbors: site " + to_string(site) + " outside box closure");
  std::vector<Site> out;
  for (int k = 0; k < site.dim(); ++k) {
    for (int step : {-1, 1}) {
      Site t = site;
      t.coords[static_cast<std::size_t>(k)] += step;
      if (box.in_closure(t)) out.push_back(std::move(t));
    }
  }
  return SiteSet(std::move(out));
}

std::vector<SiteSet> connected_components(const SiteSet& xs) {
  const std::size_t n = xs.size();
  DisjointSets ds(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Site& s = xs[i];
    for (int k = 0; k < s.dim(); ++k) {
      Site t = s;
      t.coords[static_cast<std::size_t>(k)] += 1;
      auto it = std::lower_bound(xs.begin(), xs.end(), t);
      if (it != xs.end() && *it == t) ds.unite(i, static_cast<std::size_t>(it - xs.begin()));
    }
  }
  std::map<std::size_t, std::vector<Site>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[ds.find(i)].push_back(xs[i]);
  std::vector<SiteSet> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) out.emplace_back(std::move(members));
  return out;
}

FaceSet boundary_faces(const SiteSet& xs) {
  std::vector<Face> out;
  for (const Site& s : xs) {
    for (int k = 0; k < s.dim(); ++k) {
      for (int step : {-1, 1}) {
        Site t = s;
        t.coords[static_cast<std::size_t>(k)] += step;
        if (!xs.contains(t)) out.push_back(face_between(s, t));
      }
    }
  }
  return FaceSet(std::move(out));
}

FaceSet boundary_faces_by_edges(const SiteSet& xs) {
  if (xs.empty()) return {};
  const int d = xs[0].dim();
  std::vector<int> lo(static_cast<std::size_t>(d), 0), hi(static_cast<std::size_t>(d), 0);
  for (int k = 0; k < d; ++k) {
    auto [mn, mx] = std::minmax_element(xs.begin(), xs.end(),
                                        [k](const Site& a, const Site& b) { return a[k] < b[k]; });
    lo[static_cast<std::size_t>(k)] = (*mn)[k] - 1;
    hi[static_cast<std::size_t>(k)] = (*mx)[k] + 1;
  }
  // Walk every site of the padded bounding box and every edge to its upper neighbor.
  std::vector<Face> out;
  std::vector<int> c = lo;
  while (true) {
    Site s(c);
    const bool in_s = xs.contains(s);
    for (int k = 0; k < d; ++k) {
      if (c[static_cast<std::size_t>(k)] == hi[static_cast<std::size_t>(k)]) continue;
      Site t = s;
      t.coords[static_cast<std::size_t>(k)] += 1;
      if (in_s != xs.contains(t)) out.push_back(Face{k, c});
    }
    int k = d - 1;
    for (; k >= 0; --k) {
      auto kk = static_cast<std::size_t>(k);
      if (++c[kk] <= hi[kk]) break;
      c[kk] = lo[kk];
    }
    if (k < 0) break;
  }
  return FaceSet(std::move(out));
}

SiteSet boundary_sites(const SiteSet& xs) {
  std::vector<Site> out;
  for (const Site& s : xs) {
    bool exposed = false;
    for (int k = 0; k < s.dim() && !exposed; ++k) {
      for (int step : {-1, 1}) {
        Site t = s;
        t.coords[static_cast<std::size_t>(k)] += step;
        if (!xs.contains(t)) {
          exposed = true;
          break;
        }
      }
    }
    if (exposed) out.push_back(s);
  }
  return SiteSet(std::move(out));
}

bool faces_adjacent(const Face& f1, const Face& f2) {
  require_same_dim(f1.dim(), f2.dim(), "faces_adjacent");
  const int d = f1.dim();
  const auto c1 = face_center(f1);
  const auto c2 = face_center(f2);
  // Per coordinate, each closed face is either a point (its normal axis) or an
  // interval of doubled length 2. Count dimensions of the intersection.
  int extended = 0;
  for (int k = 0; k < d; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const int lo1 = k == f1.axis ? c1[kk] : c1[kk] - 1;
    const int hi1 = k == f1.axis ? c1[kk] : c1[kk] + 1;
    const int lo2 = k == f2.axis ? c2[kk] : c2[kk] - 1;
    const int hi2 = k == f2.axis ? c2[kk] : c2[kk] + 1;
    const int lo = std::max(lo1, lo2);
    const int hi = std::min(hi1, hi2);
    if (lo > hi) return false;
    if (lo < hi) ++extended;
  }
  return extended == d - 2;
}

std::vector<std::vector<int>> ridges_of(const Face& f) {
  std::vector<std::vector<int>> out;
  const auto c = face_center(f);
  for (int k = 0; k < f.dim(); ++k) {
    if (k == f.axis) continue;
    for (int step : {-1, 1}) {
      auto r = c;
      r[static_cast<std::size_t>(k)] += step;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<Face> adjacent_faces(const Face& f) {
  std::vector<Face> out;
  const auto self = face_center(f);
  for (const auto& r : ridges_of(f)) {
    // A (d-2)-cube has exactly two odd doubled coordinates; the four faces
    // around it are obtained by stepping along either of them.
    for (int k = 0; k < f.dim(); ++k) {
      const auto kk = static_cast<std::size_t>(k);
      if (r[kk] % 2 == 0) continue;
      for (int step : {-1, 1}) {
        auto c = r;
        c[kk] += step;
        if (c != self) out.push_back(face_from_center(c));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FaceSet> face_components(const FaceSet& faces) {
  const std::size_t n = faces.size();
  DisjointSets ds(n);
  std::map<std::vector<int>, std::size_t> owner;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& r : ridges_of(faces[i])) {
      auto [it, inserted] = owner.emplace(std::move(r), i);
      if (!inserted) ds.unite(i, it->second);
    }
  }
  std::map<std::size_t, std::vector<Face>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[ds.find(i)].push_back(faces[i]);
  std::vector<FaceSet> out;
  for (auto& [root, members] : groups) out.emplace_back(std::move(members));
  return out;
}

}  // namespace treedecay
