// Reads an op script on stdin, applies it to the emitted Arrayset, and
// prints one trace line per op:
//   <seq> <op> <v> <ret|-> <len> <len_free> <digest-hex16>
// Usage: trace_main <capacity>; capacity must equal the compiled ARR_SZ.

#include "rac_shim.h"
#include "arrayset.cpp"

#include <cctype>
#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>

namespace {

const std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
const std::uint64_t kFnvPrime = 0x00000100000001b3ULL;

std::uint64_t fnv_word(std::uint64_t h, std::uint64_t w) {
  for (int i = 0; i < 8; i++) {
    h ^= (w >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
  return h;
}

// Used-list values head first, then the free-list length.
std::uint64_t digest(const Arrayset &s) {
  std::uint64_t h = kFnvOffset;
  uint curr = s.used_head;
  for (uint step = 0; step < ARR_SZ && curr < ARR_SZ; step++) {
    h = fnv_word(h, static_cast<std::uint64_t>(s.avals[curr]));
    curr = s.anext[curr];
  }
  return fnv_word(h, aset_len_free(s));
}

bool blank(const std::string &line) {
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool parse_value(const std::string &word, si64 *out) {
  if (word.empty()) return false;
  errno = 0;
  char *end = nullptr;
  long long v = std::strtoll(word.c_str(), &end, 10);
  if (errno != 0 || *end != '\0' || std::isspace(static_cast<unsigned char>(word[0]))) return false;
  *out = static_cast<si64>(v);
  return true;
}

}  // namespace

int main(int argc, char **argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <capacity>\n", argv[0]);
    return 2;
  }
  if (std::strtoull(argv[1], nullptr, 10) != ARR_SZ) {
    std::fprintf(stderr, "capacity %s does not match compiled ARR_SZ %u\n", argv[1], ARR_SZ);
    return 2;
  }

  Arrayset set = aset_init(Arrayset());
  std::string line;
  std::uint64_t lineno = 0;
  std::uint64_t seq = 0;
  while (std::getline(std::cin, line)) {
    lineno++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    std::istringstream words(line);
    std::string op, value, extra;
    words >> op >> value;
    si64 v = 0;
    if (!(words >> extra).fail() || !parse_value(value, &v) ||
        (op != "add" && op != "del" && op != "is")) {
      std::fprintf(stderr, "line %" PRIu64 ": malformed op `%s`\n", lineno, line.c_str());
      return 1;
    }
    const char *ret = "-";
    if (op == "add") {
      set = aset_add(v, set);
    } else if (op == "del") {
      set = aset_del(v, set);
    } else {
      ret = aset_is_element(v, set) ? "true" : "false";
    }
    seq++;
    std::printf("%" PRIu64 " %s %" PRId64 " %s %u %u %016" PRIx64 "\n", seq, op.c_str(),
                static_cast<std::int64_t>(v), ret, aset_len(set), aset_len_free(set), digest(set));
  }
  return 0;
}
