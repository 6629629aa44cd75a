#include "commands.hpp"

int main(int argc, char** argv) {
    return recnav::cli::run(argc, argv);
}
