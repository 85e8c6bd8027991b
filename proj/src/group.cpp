#include "broad/group.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>
#include <unordered_map>

namespace broad {

namespace {

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// flat open-addressing set of fixed-stride packed keys
class KeyStore {
public:
  explicit KeyStore(uint32_t words) : words_(words) { rehash(1u << 10); }

  uint64_t size() const { return count_; }
  const uint64_t* key_at(uint64_t i) const { return keys_.data() + i * words_; }

  uint64_t hash(const uint64_t* k) const {
    uint64_t h = 0x243f6a8885a308d3ull;
    for (uint32_t w = 0; w < words_; ++w) h = mix64(h ^ k[w]);
    return h;
  }

  bool eq(const uint64_t* a, const uint64_t* b) const {
    for (uint32_t w = 0; w < words_; ++w)
      if (a[w] != b[w]) return false;
    return true;
  }

  // returns (index, inserted)
  std::pair<uint32_t, bool> insert(const uint64_t* k) {
    if ((count_ + 1) * 16 > slots_.size() * 10) rehash(slots_.size() * 2);
    uint64_t mask = slots_.size() - 1;
    uint64_t pos = hash(k) & mask;
    while (true) {
      uint32_t s = slots_[pos];
      if (s == empty_slot) {
        uint32_t idx = static_cast<uint32_t>(count_);
        keys_.insert(keys_.end(), k, k + words_);
        slots_[pos] = idx;
        ++count_;
        return {idx, true};
      }
      if (eq(key_at(s), k)) return {s, false};
      pos = (pos + 1) & mask;
    }
  }

  std::optional<uint32_t> find(const uint64_t* k) const {
    uint64_t mask = slots_.size() - 1;
    uint64_t pos = hash(k) & mask;
    while (true) {
      uint32_t s = slots_[pos];
      if (s == empty_slot) return std::nullopt;
      if (eq(key_at(s), k)) return s;
      pos = (pos + 1) & mask;
    }
  }

  void reserve(uint64_t n) {
    keys_.reserve(n * words_);
    uint64_t want = 1;
    while (want * 10 < n * 16) want <<= 1;
    if (want > slots_.size()) rehash(want);
  }

private:
  static constexpr uint32_t empty_slot = 0xffffffffu;
  uint32_t words_;
  uint64_t count_ = 0;
  std::vector<uint64_t> keys_;
  std::vector<uint32_t> slots_;

  void rehash(uint64_t n) {
    slots_.assign(n, empty_slot);
    uint64_t mask = n - 1;
    for (uint64_t i = 0; i < count_; ++i) {
      uint64_t pos = hash(key_at(i)) & mask;
      while (slots_[pos] != empty_slot) pos = (pos + 1) & mask;
      slots_[pos] = static_cast<uint32_t>(i);
    }
  }
};

}  // namespace

struct FiniteGroup::Impl {
  std::vector<Element> gens;
  Element id;
  Codec codec;
  uint32_t words = 0;

  std::unique_ptr<KeyStore> store;
  uint64_t cap = 0;

  std::mutex mu;  // guards lazy caches
  std::optional<std::vector<ConjClass>> conj_classes;
  std::optional<std::vector<ConjClass>> inv_classes;
  // involution bookkeeping: sorted global indices + class id per position
  std::vector<uint64_t> inv_indices;
  std::vector<uint32_t> inv_class_of;
  std::optional<std::vector<uint32_t>> full_class_map;
  std::optional<std::vector<Element>> center;

  Element decode_at(uint64_t i) const { return codec.decode(store->key_at(i)); }

  std::optional<uint32_t> find(const Element& e) const {
    std::vector<uint64_t> buf(words);
    codec.encode(e, buf.data());
    return store->find(buf.data());
  }

  void require_enumerated() const {
    if (!store) throw std::logic_error("group: not enumerated");
  }

  // conjugation orbit sweep: calls visit(index) for each element of the
  // orbit of seed_idx, using found(index)->bool to skip known elements
  template <class Found, class Visit>
  void orbit(uint64_t seed_idx, const std::vector<Element>& ginv, Found found, Visit visit) {
    std::vector<uint64_t> queue{seed_idx};
    visit(seed_idx);
    std::vector<uint64_t> buf(words);
    while (!queue.empty()) {
      uint64_t cur = queue.back();
      queue.pop_back();
      Element x = decode_at(cur);
      for (size_t gi = 0; gi < gens.size(); ++gi) {
        Element y = elem_mul(ginv[gi], elem_mul(x, gens[gi]));
        codec.encode(y, buf.data());
        uint64_t idx = *store->find(buf.data());
        if (!found(idx)) {
          visit(idx);
          queue.push_back(idx);
        }
      }
    }
  }
};

FiniteGroup::FiniteGroup(std::vector<Element> generators) : impl_(std::make_shared<Impl>()) {
  if (generators.empty()) throw std::invalid_argument("group: need at least one generator");
  impl_->gens = std::move(generators);
  impl_->id = elem_identity_like(impl_->gens[0]);
  for (const auto& g : impl_->gens) {
    if (g.index() != impl_->id.index()) throw std::invalid_argument("group: mixed element kinds");
    if (std::holds_alternative<Mat>(g)) {
      const Mat& m = std::get<Mat>(g);
      if (m.det() == 0) throw std::invalid_argument("group: singular generator");
    }
  }
  impl_->codec = Codec::for_element(impl_->id);
  impl_->words = impl_->codec.words();
}

FiniteGroup FiniteGroup::from_elements(const std::vector<Element>& elements, uint64_t cap) {
  FiniteGroup g(elements);
  g.enumerate(cap);
  return g;
}

const std::vector<Element>& FiniteGroup::generators() const { return impl_->gens; }
Element FiniteGroup::identity() const { return impl_->id; }

void FiniteGroup::enumerate(uint64_t cap, uint64_t reserve_hint) {
  if (impl_->store) return;
  if (cap < 1 || cap > 0xfffffff0ull) throw std::invalid_argument("group: cap out of range");
  auto store = std::make_unique<KeyStore>(impl_->words);
  if (reserve_hint) store->reserve(std::min(reserve_hint, cap));
  std::vector<uint64_t> buf(impl_->words);
  impl_->codec.encode(impl_->id, buf.data());
  store->insert(buf.data());
  for (uint64_t i = 0; i < store->size(); ++i) {
    Element x = impl_->codec.decode(store->key_at(i));
    for (const auto& g : impl_->gens) {
      Element y = elem_mul(x, g);
      impl_->codec.encode(y, buf.data());
      store->insert(buf.data());
      if (store->size() > cap) throw CapExceeded(cap);
    }
  }
  impl_->store = std::move(store);
  impl_->cap = cap;
}

bool FiniteGroup::enumerated() const { return impl_->store != nullptr; }

uint64_t FiniteGroup::order() const {
  impl_->require_enumerated();
  return impl_->store->size();
}

Element FiniteGroup::element_at(uint64_t i) const {
  impl_->require_enumerated();
  return impl_->decode_at(i);
}

std::optional<uint64_t> FiniteGroup::index_of(const Element& e) const {
  impl_->require_enumerated();
  if (e.index() != impl_->id.index()) return std::nullopt;
  if (std::holds_alternative<Perm>(e)) {
    if (std::get<Perm>(e).degree() != impl_->codec.degree) return std::nullopt;
  } else {
    const Mat& m = std::get<Mat>(e);
    if (m.dim() != impl_->codec.dim || !(*m.field() == *impl_->codec.f)) return std::nullopt;
  }
  auto r = impl_->find(e);
  if (!r) return std::nullopt;
  return static_cast<uint64_t>(*r);
}

namespace {

void sort_classes(std::vector<ConjClass>& cls) {
  std::stable_sort(cls.begin(), cls.end(), [](const ConjClass& a, const ConjClass& b) {
    if (a.size != b.size) return a.size > b.size;
    return elem_serialize(a.rep) < elem_serialize(b.rep);
  });
}

}  // namespace

const std::vector<ConjClass>& FiniteGroup::conjugacy_classes() const {
  impl_->require_enumerated();
  std::lock_guard<std::mutex> lock(impl_->mu);
  if (impl_->conj_classes) return *impl_->conj_classes;
  uint64_t n = impl_->store->size();
  std::vector<bool> visited(n, false);
  std::vector<Element> ginv;
  for (const auto& g : impl_->gens) ginv.push_back(elem_inverse(g));
  std::vector<ConjClass> cls;
  for (uint64_t i = 0; i < n; ++i) {
    if (visited[i]) continue;
    uint64_t size = 0, min_idx = i;
    impl_->orbit(
        i, ginv, [&](uint64_t idx) { return static_cast<bool>(visited[idx]); },
        [&](uint64_t idx) {
          visited[idx] = true;
          ++size;
          // least key = least index is wrong in general; track min by key
          if (std::lexicographical_compare(
                  impl_->store->key_at(idx), impl_->store->key_at(idx) + impl_->words,
                  impl_->store->key_at(min_idx), impl_->store->key_at(min_idx) + impl_->words))
            min_idx = idx;
        });
    ConjClass c;
    c.rep = impl_->decode_at(min_idx);
    c.size = size;
    c.element_order = elem_order(c.rep);
    cls.push_back(std::move(c));
  }
  sort_classes(cls);
  // class equation sanity: sizes sum to the order and divide it
  uint64_t total = 0;
  for (const auto& c : cls) total += c.size;
  if (total != n) throw std::logic_error("group: class sizes do not sum to order");
  impl_->conj_classes = std::move(cls);
  return *impl_->conj_classes;
}

const std::vector<ConjClass>& FiniteGroup::involution_classes() const {
  impl_->require_enumerated();
  std::lock_guard<std::mutex> lock(impl_->mu);
  if (impl_->inv_classes) return *impl_->inv_classes;
  uint64_t n = impl_->store->size();
  // collect involutions (ascending global index)
  std::vector<uint64_t>& invs = impl_->inv_indices;
  invs.clear();
  for (uint64_t i = 0; i < n; ++i) {
    Element x = impl_->decode_at(i);
    if (elem_is_identity(x)) continue;
    if (elem_is_identity(elem_mul(x, x))) invs.push_back(i);
  }
  auto inv_pos = [&](uint64_t idx) {
    return static_cast<uint32_t>(std::lower_bound(invs.begin(), invs.end(), idx) - invs.begin());
  };
  std::vector<Element> ginv;
  for (const auto& g : impl_->gens) ginv.push_back(elem_inverse(g));
  constexpr uint32_t unassigned = 0xffffffffu;
  std::vector<uint32_t>& class_of = impl_->inv_class_of;
  class_of.assign(invs.size(), unassigned);
  std::vector<std::pair<ConjClass, uint32_t>> cls;  // class + provisional id
  for (size_t s = 0; s < invs.size(); ++s) {
    if (class_of[s] != unassigned) continue;
    uint32_t cid = static_cast<uint32_t>(cls.size());
    uint64_t size = 0, min_idx = invs[s];
    impl_->orbit(
        invs[s], ginv, [&](uint64_t idx) { return class_of[inv_pos(idx)] != unassigned; },
        [&](uint64_t idx) {
          class_of[inv_pos(idx)] = cid;
          ++size;
          if (std::lexicographical_compare(
                  impl_->store->key_at(idx), impl_->store->key_at(idx) + impl_->words,
                  impl_->store->key_at(min_idx), impl_->store->key_at(min_idx) + impl_->words))
            min_idx = idx;
        });
    ConjClass c;
    c.rep = impl_->decode_at(min_idx);
    c.size = size;
    c.element_order = 2;
    cls.push_back({std::move(c), cid});
  }
  std::stable_sort(cls.begin(), cls.end(), [](const auto& a, const auto& b) {
    if (a.first.size != b.first.size) return a.first.size > b.first.size;
    return elem_serialize(a.first.rep) < elem_serialize(b.first.rep);
  });
  // remap class ids to the sorted order
  std::vector<uint32_t> remap(cls.size());
  for (uint32_t i = 0; i < cls.size(); ++i) remap[cls[i].second] = i;
  for (auto& c : class_of) c = remap[c];
  std::vector<ConjClass> out;
  for (auto& p : cls) out.push_back(std::move(p.first));
  impl_->inv_classes = std::move(out);
  return *impl_->inv_classes;
}

std::optional<uint32_t> FiniteGroup::involution_class_id(const Element& x) const {
  involution_classes();
  auto idx = index_of(x);
  if (!idx) return std::nullopt;
  auto it = std::lower_bound(impl_->inv_indices.begin(), impl_->inv_indices.end(), *idx);
  if (it == impl_->inv_indices.end() || *it != *idx) return std::nullopt;
  return impl_->inv_class_of[it - impl_->inv_indices.begin()];
}

std::optional<uint32_t> FiniteGroup::class_id(const Element& x) const {
  const auto& cls = conjugacy_classes();
  auto idx = index_of(x);
  if (!idx) return std::nullopt;
  std::lock_guard<std::mutex> lock(impl_->mu);
  if (!impl_->full_class_map) {
    uint64_t n = impl_->store->size();
    if (n > 8'000'000) throw std::logic_error("group: class map restricted to moderate orders");
    std::vector<uint32_t> map(n, 0xffffffffu);
    std::vector<Element> ginv;
    for (const auto& g : impl_->gens) ginv.push_back(elem_inverse(g));
    for (uint32_t cid = 0; cid < cls.size(); ++cid) {
      uint64_t seed = *impl_->find(cls[cid].rep);
      impl_->orbit(
          seed, ginv, [&](uint64_t i) { return map[i] != 0xffffffffu; },
          [&](uint64_t i) { map[i] = cid; });
    }
    impl_->full_class_map = std::move(map);
  }
  return (*impl_->full_class_map)[*idx];
}

std::vector<ConjClass> FiniteGroup::classes_with_central_square() const {
  const auto& cls = conjugacy_classes();
  std::vector<Element> z = center_elements();
  auto in_center = [&](const Element& e) {
    for (const auto& c : z)
      if (c == e) return true;
    return false;
  };
  std::vector<ConjClass> out;
  for (const auto& c : cls) {
    uint32_t o = c.element_order;
    bool two_power = (o & (o - 1)) == 0;  // includes o = 1
    if (!two_power) continue;
    if (in_center(elem_mul(c.rep, c.rep))) out.push_back(c);
  }
  return out;  // inherits canonical order
}

std::vector<Element> FiniteGroup::centralizer_elements(const Element& g) const {
  impl_->require_enumerated();
  std::vector<Element> out;
  uint64_t n = impl_->store->size();
  for (uint64_t i = 0; i < n; ++i) {
    Element x = impl_->decode_at(i);
    if (elem_mul(x, g) == elem_mul(g, x)) out.push_back(std::move(x));
  }
  return out;
}

uint64_t FiniteGroup::centralizer_order(const Element& g) const {
  impl_->require_enumerated();
  uint64_t n = impl_->store->size(), count = 0;
  for (uint64_t i = 0; i < n; ++i) {
    Element x = impl_->decode_at(i);
    if (elem_mul(x, g) == elem_mul(g, x)) ++count;
  }
  return count;
}

std::vector<Element> FiniteGroup::center_elements() const {
  impl_->require_enumerated();
  std::lock_guard<std::mutex> lock(impl_->mu);
  if (impl_->center) return *impl_->center;
  std::vector<Element> out;
  uint64_t n = impl_->store->size();
  for (uint64_t i = 0; i < n; ++i) {
    Element x = impl_->decode_at(i);
    bool central = true;
    for (const auto& g : impl_->gens)
      if (!(elem_mul(x, g) == elem_mul(g, x))) {
        central = false;
        break;
      }
    if (central) out.push_back(std::move(x));
  }
  impl_->center = out;
  return out;
}

std::optional<Element> FiniteGroup::conjugating_element(const Element& from, const Element& to) const {
  impl_->require_enumerated();
  auto from_idx = index_of(from), to_idx = index_of(to);
  if (!from_idx || !to_idx) return std::nullopt;
  if (*from_idx == *to_idx) return impl_->id;
  std::vector<Element> ginv;
  for (const auto& g : impl_->gens) ginv.push_back(elem_inverse(g));
  // BFS with parent edges: step x -> g x g^{-1}
  std::unordered_map<uint64_t, std::pair<uint64_t, uint32_t>> parent;
  parent[*from_idx] = {*from_idx, 0xffffffffu};
  std::vector<uint64_t> queue{*from_idx};
  std::vector<uint64_t> buf(impl_->words);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    uint64_t cur = queue[qi];
    Element x = impl_->decode_at(cur);
    for (uint32_t gi = 0; gi < impl_->gens.size(); ++gi) {
      Element y = elem_mul(impl_->gens[gi], elem_mul(x, ginv[gi]));
      impl_->codec.encode(y, buf.data());
      uint64_t idx = *impl_->store->find(buf.data());
      if (parent.count(idx)) continue;
      parent[idx] = {cur, gi};
      if (idx == *to_idx) {
        Element h = impl_->id;
        uint64_t walk = idx;
        while (walk != *from_idx) {
          auto [prev, g] = parent[walk];
          h = elem_mul(h, impl_->gens[g]);  // h accumulates g_k ... g_1
          walk = prev;
        }
        return h;
      }
      queue.push_back(idx);
    }
  }
  return std::nullopt;
}

std::pair<bool, FiniteGroup> is_elementary_abelian(const std::vector<Element>& elements,
                                                   const Element& ambient_identity, uint64_t cap) {
  std::vector<Element> gens = elements;
  gens.push_back(ambient_identity);
  FiniteGroup sub(std::move(gens));
  sub.enumerate(cap);
  bool ok = true;
  for (size_t i = 0; i < elements.size() && ok; ++i) {
    if (!elem_is_identity(elem_mul(elements[i], elements[i]))) ok = false;
    for (size_t j = i + 1; j < elements.size() && ok; ++j)
      if (!elem_commutes(elements[i], elements[j])) ok = false;
  }
  if (ok) {
    // generators involutive and commuting forces the whole closure
    // elementary abelian; recheck the closure anyway at small scale
    if (sub.order() <= 4096) {
      for (uint64_t i = 0; i < sub.order() && ok; ++i) {
        Element x = sub.element_at(i);
        if (!elem_is_identity(elem_mul(x, x))) ok = false;
      }
    }
  }
  return {ok, sub};
}

}  // namespace broad
