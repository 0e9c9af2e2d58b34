// alternating
#include <cstdio>
#include <vector>

int main() {
    int n;
    if (std::scanf("%d", &n) != 1) return 1;
    std::vector<long long> values(n);
    for (int i = 0; i < n; i++) std::scanf("%lld", &values[i]);
    long long result = 0;
    for (int i = 0; i < n; i++) {
        if (i % 2 == 0) result += values[i];
        else result -= values[i];
    }
    std::printf("%lld\n", result);
    return 0;
}
