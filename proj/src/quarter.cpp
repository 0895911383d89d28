#include "taxtopics/quarter.hpp"

#include <charconv>
#include <stdexcept>

namespace taxtopics {

namespace {

int parse_int(const std::string& s, std::size_t from, std::size_t len) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data() + from, s.data() + from + len, v);
  if (ec != std::errc() || p != s.data() + from + len)
    throw std::invalid_argument("bad numeric field in '" + s + "'");
  return v;
}

}  // namespace

std::string to_string(const Quarter& qt) {
  return std::to_string(qt.year) + "Q" + std::to_string(qt.q);
}

Quarter parse_quarter(const std::string& s) {
  auto pos = s.find('Q');
  if (pos == std::string::npos || pos == 0 || pos + 2 != s.size())
    throw std::invalid_argument("bad quarter '" + s + "' (expected YYYYQn)");
  Quarter qt{parse_int(s, 0, pos), parse_int(s, pos + 1, 1)};
  if (qt.q < 1 || qt.q > 4)
    throw std::invalid_argument("bad quarter '" + s + "'");
  return qt;
}

Date parse_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw std::invalid_argument("bad date '" + s + "' (expected YYYY-MM-DD)");
  Date d{parse_int(s, 0, 4), parse_int(s, 5, 2), parse_int(s, 8, 2)};
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
    throw std::invalid_argument("bad date '" + s + "'");
  return d;
}

std::string to_string(const Date& d) {
  char buf[11];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return std::string(buf);
}

Quarter assign_quarter(const Date& d) {
  return Quarter{d.year, (d.month - 1) / 3 + 1};
}

}  // namespace taxtopics
