#include <cstdlib>
#include <iostream>

#include <omp.h>

#include "mdclt/cli.hpp"

int main(int argc, char** argv) {
  // Optional cap on worker threads; results do not depend on it.
  if (const char* cap = std::getenv("MDCLT_THREADS")) {
    const int t = std::atoi(cap);
    if (t > 0) omp_set_num_threads(t);
  }
  return mdclt::cli::main_entry(argc, argv, std::cout, std::cerr);
}
