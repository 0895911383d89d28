#pragma once

#include <compare>
#include <string>

namespace taxtopics {

// Calendar quarter, formatted YYYYQn.
struct Quarter {
  int year = 0;
  int q = 1;  // 1..4

  int index() const { return year * 4 + (q - 1); }
  static Quarter from_index(int idx) {
    int y = idx >= 0 ? idx / 4 : (idx - 3) / 4;
    return Quarter{y, idx - y * 4 + 1};
  }
  Quarter next() const { return from_index(index() + 1); }

  auto operator<=>(const Quarter&) const = default;
};

std::string to_string(const Quarter& qt);

// parses "YYYYQn"
Quarter parse_quarter(const std::string& s);

// ISO-8601 calendar date
struct Date {
  int year = 0;
  int month = 1;
  int day = 1;
  auto operator<=>(const Date&) const = default;
};

// parses "YYYY-MM-DD"
Date parse_date(const std::string& s);
std::string to_string(const Date& d);

// Jan-Mar = Q1, Apr-Jun = Q2, Jul-Sep = Q3, Oct-Dec = Q4
Quarter assign_quarter(const Date& d);

}  // namespace taxtopics
