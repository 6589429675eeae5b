// Minimal stand-in for the Algorithmic C headers, enough to compile and run
// plain C++ emitted by rarc. Integer aliases are native fixed-width types.

#ifndef RAC_SHIM_H
#define RAC_SHIM_H

#include <cassert>
#include <cstddef>
#include <cstdint>

typedef unsigned int uint;
typedef std::uint8_t ui8;
typedef std::uint16_t ui16;
typedef std::uint32_t ui32;
typedef std::uint64_t ui64;
typedef std::int8_t si8;
typedef std::int16_t si16;
typedef std::int32_t si32;
typedef std::int64_t si64;

// Fixed-length array with value semantics: copies and assignments copy
// every element. Out-of-range indices trip an assert in debug builds.
template <typename T, std::size_t N>
class array {
public:
  T &operator[](std::size_t i) {
    assert(i < N);
    return elems_[i];
  }
  const T &operator[](std::size_t i) const {
    assert(i < N);
    return elems_[i];
  }
  static constexpr std::size_t size() { return N; }

private:
  T elems_[N];
};

#endif
