// records
#include <cstdio>
#include <vector>

int main() {
    int n;
    if (std::scanf("%d", &n) != 1) return 1;
    std::vector<long long> values(n);
    for (int i = 0; i < n; i++) std::scanf("%lld", &values[i]);
    long long best = values[0], result = 1;
    for (int i = 1; i < n; i++) {
        if (values[i] > best) {
            best = values[i];
            result++;
        }
    }
    std::printf("%lld\n", result);
    return 0;
}
