#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "c2aug/bag.hpp"

namespace c2aug {

// MBAG1 binary container.
//
//   magic  6 bytes  4D 42 41 47 31 00  ("MBAG1\0")
//   u32    feature dimension d (little endian)
//   u32    bag count
//   per bag:
//     u64  bag id
//     u8   label
//     u8   has-instance-labels flag
//     u32  n (instance count)
//     n*d  IEEE-754 binary32 little endian, row-major
//     n    bytes of instance labels, present iff the flag is set
//
// Values are stored in 32-bit precision; loading widens to double.
// Malformed input raises a format error naming the byte offset.

void save_bags(const std::string& path, const std::vector<Bag>& bags,
               std::size_t dim_if_empty = 0);
std::vector<Bag> load_bags(const std::string& path);

// Header fields without reading the payload, for `inspect`.
struct BagFileInfo {
  std::size_t dim = 0;
  std::size_t count = 0;
};
BagFileInfo read_bag_header(const std::string& path);

}  // namespace c2aug
