#include "unitri/word.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace unitri {

UniTriMatrix eval_word(const GeneratorWord& w, int n, PrimeModulus p) {
  UniTriMatrix m(n, p);
  for (const auto& s : w.steps) {
    if (s.row < 1 || s.row >= n)
      throw std::invalid_argument("eval_word: step row out of range");
    if (s.sign != 1 && s.sign != -1)
      throw std::invalid_argument("eval_word: step sign must be +1 or -1");
    // Right-multiplying by I + s*E(r, r+1) adds s times column r to
    // column r+1; only rows 1..r can be affected.
    const int r = s.row;
    for (int i = 1; i <= r; ++i) {
      std::int64_t v = m(i, r + 1) + s.sign * m(i, r);
      m.raw()(i - 1, r) = mod_reduce(v, p.p);
    }
  }
  return m;
}

GeneratorWord inverse_word(const GeneratorWord& w) {
  GeneratorWord r;
  r.steps.reserve(w.steps.size());
  for (auto it = w.steps.rbegin(); it != w.steps.rend(); ++it)
    r.push(it->row, -it->sign);
  return r;
}

GeneratorWord repeated_step(int row, int sign, std::int64_t count) {
  if (count < 0) throw std::invalid_argument("repeated_step: negative count");
  GeneratorWord w;
  w.steps.assign(static_cast<std::size_t>(count), GeneratorStep{row, sign});
  return w;
}

std::string format_word(const GeneratorWord& w) {
  std::string out;
  for (std::size_t k = 0; k < w.steps.size(); ++k) {
    if (k > 0) out += ' ';
    out += w.steps[k].sign > 0 ? '+' : '-';
    out += std::to_string(w.steps[k].row);
  }
  return out;
}

GeneratorWord parse_word(std::string_view text) {
  GeneratorWord w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos >= text.size()) break;
    int sign;
    if (text[pos] == '+')
      sign = 1;
    else if (text[pos] == '-')
      sign = -1;
    else
      throw std::invalid_argument("parse_word: token must start with + or -");
    ++pos;
    std::size_t end = pos;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end])))
      ++end;
    if (end == pos) throw std::invalid_argument("parse_word: missing row number");
    int row = 0;
    auto res = std::from_chars(text.data() + pos, text.data() + end, row);
    if (res.ec != std::errc{} || row < 1)
      throw std::invalid_argument("parse_word: bad row number");
    w.push(row, sign);
    pos = end;
  }
  return w;
}

}  // namespace unitri
