#include "vitdec/codec.hpp"

#include <numeric>
#include <stdexcept>

namespace vitdec {

int PuncturePattern::kept_per_period() const {
  return std::accumulate(mask.begin(), mask.end(), 0);
}

void PuncturePattern::validate() const {
  if (b < 1 || period < 1 || static_cast<int>(mask.size()) != b * period) {
    throw std::invalid_argument("puncture mask shape mismatch");
  }
  for (int col = 0; col < period; ++col) {
    int kept = 0;
    for (int row = 0; row < b; ++row) kept += at(row, col);
    if (kept == 0) {
      throw std::invalid_argument("puncture mask drops an entire stage");
    }
  }
}

PuncturePattern PuncturePattern::parse(const std::string& rows) {
  PuncturePattern p;
  std::vector<std::string> lines;
  std::string cur;
  for (char c : rows) {
    if (c == ';') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  lines.push_back(cur);
  p.b = static_cast<int>(lines.size());
  p.period = lines.empty() ? 0 : static_cast<int>(lines[0].size());
  p.mask.assign(p.b * p.period, 0);
  for (int row = 0; row < p.b; ++row) {
    if (static_cast<int>(lines[row].size()) != p.period) {
      throw std::invalid_argument("puncture mask rows differ in length");
    }
    for (int col = 0; col < p.period; ++col) {
      const char c = lines[row][col];
      if (c != '0' && c != '1') {
        throw std::invalid_argument("puncture mask must be 0/1");
      }
      p.mask[col * p.b + row] = static_cast<std::uint8_t>(c - '0');
    }
  }
  p.name = rows;
  p.validate();
  return p;
}

PuncturePattern PuncturePattern::named(const std::string& name) {
  PuncturePattern p;
  if (name == "r12") {
    p = parse("1;1");
  } else if (name == "r23") {
    p = parse("11;10");
  } else if (name == "r34") {
    p = parse("110;101");
  } else {
    return parse(name);  // fall back to an explicit mask string
  }
  p.name = name;
  return p;
}

BitVec encode(const BitVec& bits, const Trellis& trellis) {
  const int b = trellis.outputs_per_bit();
  BitVec out(bits.size() * b);
  std::uint32_t state = 0;
  for (std::size_t t = 0; t < bits.size(); ++t) {
    const int u = bits[t] & 1;
    const std::uint32_t bo = trellis.branch_output(state, u);
    for (int i = 0; i < b; ++i) {
      out[t * b + i] = static_cast<std::uint8_t>((bo >> (b - 1 - i)) & 1);
    }
    state = trellis.next_state(state, u);
  }
  return out;
}

BitVec puncture(const BitVec& coded, const PuncturePattern& pattern) {
  pattern.validate();
  if (coded.size() % pattern.b != 0) {
    throw std::invalid_argument("coded length is not a multiple of B");
  }
  const std::size_t stages = coded.size() / pattern.b;
  BitVec out;
  out.reserve(coded.size());
  for (std::size_t t = 0; t < stages; ++t) {
    const int col = static_cast<int>(t % pattern.period);
    for (int row = 0; row < pattern.b; ++row) {
      if (pattern.at(row, col)) out.push_back(coded[t * pattern.b + row]);
    }
  }
  return out;
}

}  // namespace vitdec
