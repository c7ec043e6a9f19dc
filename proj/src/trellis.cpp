#include "vitdec/trellis.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace vitdec {

CodeSpec CodeSpec::from_octal(int k, const std::string& octal_csv) {
  CodeSpec spec;
  spec.k = k;
  std::stringstream ss(octal_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    unsigned long v = std::stoul(tok, &pos, 8);
    if (pos != tok.size()) {
      throw std::invalid_argument("bad octal polynomial: " + tok);
    }
    spec.polys.push_back(static_cast<std::uint32_t>(v));
  }
  spec.b = static_cast<int>(spec.polys.size());
  return spec;
}

std::string CodeSpec::polys_octal() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (i) os << ',';
    os << std::oct << polys[i] << std::dec;
  }
  return os.str();
}

namespace {

void validate(const CodeSpec& spec) {
  if (spec.k < 2) throw std::invalid_argument("constraint length must be >= 2");
  if (spec.b < 2) throw std::invalid_argument("need at least 2 outputs per bit");
  if (static_cast<int>(spec.polys.size()) != spec.b) {
    throw std::invalid_argument("polynomial count must equal B");
  }
  // Survivor tables hold 16-bit state indices.
  if (spec.k > 16) throw std::invalid_argument("constraint length too large");
  const std::uint32_t mask = (1u << spec.k) - 1;
  for (std::uint32_t g : spec.polys) {
    if (g == 0) throw std::invalid_argument("zero generator polynomial");
    if ((g & ~mask) != 0) {
      throw std::invalid_argument("generator polynomial wider than K bits");
    }
  }
}

}  // namespace

Trellis::Trellis(const CodeSpec& spec) : spec_(spec) {
  validate(spec);
  num_states_ = 1 << (spec.k - 1);
  next_.resize(num_states_ * 2);
  out_.resize(num_states_ * 2);
  pred_.assign(num_states_ * 2, 0);
  in_out_.assign(num_states_ * 2, 0);

  for (std::uint32_t state = 0; state < static_cast<std::uint32_t>(num_states_); ++state) {
    for (int u = 0; u < 2; ++u) {
      // Register contents: new bit on top of the K-1 state bits.
      const std::uint32_t reg = (static_cast<std::uint32_t>(u) << (spec.k - 1)) | state;
      std::uint32_t bo = 0;
      for (int b = 0; b < spec.b; ++b) {
        const int parity = std::popcount(spec.polys[b] & reg) & 1;
        bo |= static_cast<std::uint32_t>(parity) << (spec.b - 1 - b);
      }
      const std::uint32_t nxt =
          (static_cast<std::uint32_t>(u) << (spec.k - 2)) | (state >> 1);
      next_[state * 2 + u] = nxt;
      out_[state * 2 + u] = bo;
    }
  }

  // Predecessors of j share its low K-2 bits: i' = 2*low, i'' = 2*low + 1.
  const std::uint32_t low_mask = static_cast<std::uint32_t>(num_states_ / 2 - 1);
  for (std::uint32_t j = 0; j < static_cast<std::uint32_t>(num_states_); ++j) {
    const std::uint32_t low = (num_states_ == 2) ? 0 : (j & low_mask);
    const int u = branch_input(j);
    for (int which = 0; which < 2; ++which) {
      const std::uint32_t i = low * 2 + which;
      pred_[j * 2 + which] = i;
      in_out_[j * 2 + which] = out_[i * 2 + u];
    }
  }

  const std::uint32_t ones = (1u << spec.b) - 1;
  complement_paired_ = true;
  for (std::uint32_t state = 0; state < static_cast<std::uint32_t>(num_states_); ++state) {
    if ((out_[state * 2] ^ out_[state * 2 + 1]) != ones) {
      complement_paired_ = false;
      break;
    }
  }
}

Trellis build_trellis(const CodeSpec& spec) { return Trellis(spec); }

}  // namespace vitdec
