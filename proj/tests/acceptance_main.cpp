#include <iostream>

#include "acceptance.hpp"

int main() {
  const auto results = chromdev::acceptance::run_all();
  chromdev::acceptance::print_results(std::cout, results);
  return chromdev::acceptance::all_passed(results) ? 0 : 1;
}
