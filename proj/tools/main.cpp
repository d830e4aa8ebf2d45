#include "qwalk/commands.hpp"

int main(int argc, char** argv) {
    return qwalk::run_cli(argc, argv);
}
