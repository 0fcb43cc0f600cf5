#include <bit>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hcache/binomial.hpp"
#include "hcache/simulator.hpp"

namespace hcache {

namespace {

using Bytes = std::vector<std::uint8_t>;
using Mask = std::uint32_t;

void xor_into(Bytes& dst, const Bytes& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

std::vector<Mask> subsets_of_size(int n, int size) {
  std::vector<Mask> out;
  for (Mask m = 0; m < (Mask{1} << n); ++m)
    if (std::popcount(m) == size) out.push_back(m);
  return out;
}

}  // namespace

CodecReport codec_verify(int sbs_count, int replication, const std::vector<CodecRequest>& requests,
                         std::size_t subfile_bytes, std::uint64_t seed) {
  if (sbs_count < 1 || sbs_count > 16)
    throw std::invalid_argument("codec_verify: K must be in [1, 16]");
  if (replication < 1 || replication > sbs_count)
    throw std::invalid_argument("codec_verify: T must be in [1, K]");
  if (subfile_bytes == 0) throw std::invalid_argument("codec_verify: empty subfiles");

  // demand[c] = requested content or -1.
  std::vector<int> demand(sbs_count, -1);
  for (const auto& r : requests) {
    if (r.sbs < 0 || r.sbs >= sbs_count)
      throw std::invalid_argument("codec_verify: SBS index out of range");
    if (demand[r.sbs] >= 0 && demand[r.sbs] != r.content)
      throw std::invalid_argument("codec_verify: SBS " + std::to_string(r.sbs + 1) +
                                  " requests two distinct contents");
    demand[r.sbs] = r.content;
  }

  const auto pieces = subsets_of_size(sbs_count, replication);
  const auto messages_sets = subsets_of_size(sbs_count, replication + 1);

  // Server library: every requested content split into one subfile per
  // T-subset of SBSs.
  std::mt19937_64 rng(seed);
  std::map<int, std::map<Mask, Bytes>> library;
  for (int d : demand) {
    if (d < 0 || library.count(d)) continue;
    auto& subfiles = library[d];
    for (Mask s : pieces) {
      Bytes b(subfile_bytes);
      for (auto& byte : b) byte = static_cast<std::uint8_t>(rng());
      subfiles.emplace(s, std::move(b));
    }
  }

  // Placement: SBS c holds subfile (n, S) iff c is in S.
  std::vector<std::map<std::pair<int, Mask>, Bytes>> cache(sbs_count);
  for (const auto& [content, subfiles] : library)
    for (const auto& [s, bytes] : subfiles)
      for (int c = 0; c < sbs_count; ++c)
        if (s & (Mask{1} << c)) cache[c].emplace(std::make_pair(content, s), bytes);

  // Delivery: one XOR per (T+1)-subset holding at least one requester.
  struct Message {
    Mask set;
    Bytes payload;
  };
  std::vector<Message> sent;
  for (Mask s : messages_sets) {
    Bytes payload(subfile_bytes, 0);
    bool any = false;
    for (int c = 0; c < sbs_count; ++c) {
      if (!(s & (Mask{1} << c)) || demand[c] < 0) continue;
      xor_into(payload, library.at(demand[c]).at(s & ~(Mask{1} << c)));
      any = true;
    }
    if (any) sent.push_back({s, std::move(payload)});
  }

  // Decoding uses only the SBS's own cache and the multicasts.
  bool ok = true;
  int requesters = 0;
  for (int c = 0; c < sbs_count; ++c) {
    if (demand[c] < 0) continue;
    ++requesters;
    const Mask self = Mask{1} << c;
    std::map<Mask, Bytes> recovered;
    for (const auto& m : sent) {
      if (!(m.set & self)) continue;
      Bytes x = m.payload;
      for (int o = 0; o < sbs_count; ++o) {
        const Mask bit = Mask{1} << o;
        if (o == c || !(m.set & bit) || demand[o] < 0) continue;
        xor_into(x, cache[c].at({demand[o], m.set & ~bit}));
      }
      recovered.emplace(m.set & ~self, std::move(x));
    }
    for (Mask s : pieces) {
      const Bytes* got = nullptr;
      if (s & self) {
        got = &cache[c].at({demand[c], s});
      } else if (auto it = recovered.find(s); it != recovered.end()) {
        got = &it->second;
      }
      if (!got || *got != library.at(demand[c]).at(s)) ok = false;
    }
  }

  CodecReport rep;
  rep.decoded = ok;
  rep.requesters = requesters;
  rep.messages = static_cast<long>(sent.size());
  rep.expected_messages =
      static_cast<long>(*binomial_exact(sbs_count, replication + 1) -
                        *binomial_exact(sbs_count - requesters, replication + 1));
  rep.subfile_bytes = subfile_bytes;
  rep.load = static_cast<double>(rep.messages) /
             static_cast<double>(*binomial_exact(sbs_count, replication));
  return rep;
}

}  // namespace hcache
