#ifndef BROAD_GROUP_HPP
#define BROAD_GROUP_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "broad/element.hpp"

namespace broad {

// thrown when a closure would exceed the enumeration cap; never truncates
struct CapExceeded : std::runtime_error {
  uint64_t cap;
  explicit CapExceeded(uint64_t c)
      : std::runtime_error("enumeration cap " + std::to_string(c) + " exceeded"), cap(c) {}
};

struct ConjClass {
  Element rep;  // least-key member of the class
  uint64_t size = 0;
  uint32_t element_order = 0;
};

/*
  Brute-force engine for generated finite groups.  Elements live as
  fixed-width packed keys in one flat vector (insertion order = BFS closure
  order), so the memory cost per element is a few words even for groups in
  the 10^8 range.  Immutable after enumeration; lazily computed views are
  cached.  Class lists are canonically ordered (size descending, then
  serialized representative) so repeated runs are byte-identical.
*/
class FiniteGroup {
public:
  static constexpr uint64_t default_cap = 20'000'000;

  explicit FiniteGroup(std::vector<Element> generators);
  // wrap an explicit element set (assumed closed; verified by closure)
  static FiniteGroup from_elements(const std::vector<Element>& elements, uint64_t cap);

  const std::vector<Element>& generators() const;
  Element identity() const;

  void enumerate(uint64_t cap = default_cap, uint64_t reserve_hint = 0);
  bool enumerated() const;
  uint64_t order() const;
  Element element_at(uint64_t i) const;
  std::optional<uint64_t> index_of(const Element& e) const;
  bool contains(const Element& e) const { return index_of(e).has_value(); }

  // full partition into conjugation orbits, canonical order
  const std::vector<ConjClass>& conjugacy_classes() const;
  // classes of order-2 elements; computed by orbit closure inside the
  // involution set only, so it stays cheap for very large groups
  const std::vector<ConjClass>& involution_classes() const;
  // classes of 2-elements g with g^2 in Z(G), identity included
  std::vector<ConjClass> classes_with_central_square() const;

  std::vector<Element> centralizer_elements(const Element& g) const;
  uint64_t centralizer_order(const Element& g) const;
  std::vector<Element> center_elements() const;

  // class index (into involution_classes()) of an involution
  std::optional<uint32_t> involution_class_id(const Element& x) const;
  // class index (into conjugacy_classes()) of any element; builds a full
  // element->class map on first use, so restricted to moderate orders
  std::optional<uint32_t> class_id(const Element& x) const;
  // h with h * from * h^{-1} = to, if conjugate
  std::optional<Element> conjugating_element(const Element& from, const Element& to) const;

private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// true iff all pairs commute and every element squares to the identity;
// also returns the generated subgroup (identity context needed for the
// empty list)
std::pair<bool, FiniteGroup> is_elementary_abelian(const std::vector<Element>& elements,
                                                   const Element& ambient_identity,
                                                   uint64_t cap = FiniteGroup::default_cap);

}  // namespace broad

#endif
