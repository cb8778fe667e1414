#include "coalesce/cli/app.hpp"

int main(int argc, char** argv) { return coalesce::cli::run(argc, argv); }
