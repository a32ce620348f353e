#pragma once

#include <string>
#include <vector>

#include "chromacomm/errors.hpp"
#include "chromacomm/graph.hpp"

namespace chromacomm::lowerbound {

// Four-vertex gadget encoding one bit into graph structure.  Both variants
// are 4-cycles (2-regular, so delta = 2 and three colors suffice):
//   bit 0: cycle 1-2-4-3, vertex pairs (1,4) and (2,3) sit opposite -- every
//          proper 3-coloring must repeat a color on at least one of them;
//   bit 1: cycle 1-3-2-4, where {1,4} and {2,3} are edges -- those pairs can
//          never share a color.
// A decoder holding any proper 3-coloring recovers the bit by testing the
// two equalities.
inline std::vector<Edge> gadget_edges(int bit) {
  check_config(bit == 0 || bit == 1, "gadget_edges: bit must be 0 or 1");
  std::vector<Edge> edges = {Edge{1, 3}, Edge{2, 4}};
  if (bit == 0) {
    edges.push_back(Edge{1, 2});
    edges.push_back(Edge{3, 4});
  } else {
    edges.push_back(Edge{1, 4});
    edges.push_back(Edge{2, 3});
  }
  return edges;
}

// Bit string encoded as a disjoint union of gadgets; gadget i (1-based)
// occupies vertices 4(i-1)+1 .. 4(i-1)+4.  All edges belong to Alice: the
// instance is legal input for any of the coloring protocols, and whatever
// proper coloring they emit carries the string back out.
struct EncodedString {
  std::string bits;
  Graph graph;
};

inline EncodedString encode_bits(const std::string& bits) {
  check_config(!bits.empty(), "encode_bits: empty bit string");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const char ch = bits[i];
    check_config(ch == '0' || ch == '1', "encode_bits: string must be over {0,1}");
    const int base = static_cast<int>(4 * i);
    for (const auto& e : gadget_edges(ch - '0'))
      edges.push_back(Edge{base + e.u, base + e.v});
  }
  return EncodedString{bits, Graph(static_cast<int>(4 * bits.size()), std::move(edges))};
}

inline PartitionedGraph encode_bits_partitioned(const std::string& bits) {
  const EncodedString enc = encode_bits(bits);
  return partition_edges(enc.graph, PartitionMode::all_alice, 0);
}

// Decodes one gadget from the colors of its four vertices.
inline int decode_bit(int c1, int c2, int c3, int c4) {
  return (c1 == c4 || c2 == c3) ? 0 : 1;
}

// Decodes `count` gadgets from a coloring of the 4*count-vertex union.
inline std::string decode_bits(const Coloring& coloring, int count) {
  check_config(count >= 1 && coloring.size() >= 4 * count,
               "decode_bits: coloring too small for the gadget count");
  std::string bits;
  bits.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int base = 4 * i;
    bits += static_cast<char>(
        '0' + decode_bit(coloring[base + 1], coloring[base + 2], coloring[base + 3],
                         coloring[base + 4]));
  }
  return bits;
}

}  // namespace chromacomm::lowerbound
