#include <iostream>

#include "cli_app.hpp"

int main(int argc, char** argv) {
  try {
    return qdb::cli::run(argc, argv, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "qdb: internal error: " << e.what() << '\n';
    return 4;
  }
}
