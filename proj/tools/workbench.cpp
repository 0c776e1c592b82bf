#include <iostream>

int main() {
    std::cout << "workbench: commands pending\n";
    return 0;
}
