// spread
#include <cstdio>
#include <vector>

int main() {
    int n;
    if (std::scanf("%d", &n) != 1) return 1;
    std::vector<long long> values(n);
    for (int i = 0; i < n; i++) std::scanf("%lld", &values[i]);
    long long lo = values[0], hi = values[0];
    for (int i = 1; i < n; i++) {
        if (values[i] < lo) lo = values[i];
        if (values[i] > hi) hi = values[i];
    }
    long long result = hi - lo;
    std::printf("%lld\n", result);
    return 0;
}
