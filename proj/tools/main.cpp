#include <filesystem>
#include <iostream>

#include "reicqed/cli/app.hpp"

int main(int argc, char** argv) {
  std::string catalog = REICQED_INSTALLED_CATALOG;
  if (!std::filesystem::exists(catalog)) catalog = REICQED_SOURCE_CATALOG;
  return reicqed::cli::main_entry(argc, argv, std::cout, std::cerr, catalog);
}
