// min
#include <cstdio>
#include <vector>

int main() {
    int n;
    if (std::scanf("%d", &n) != 1) return 1;
    std::vector<long long> values(n);
    for (int i = 0; i < n; i++) std::scanf("%lld", &values[i]);
    long long result = values[0];
    for (int i = 1; i < n; i++)
        if (values[i] < result) result = values[i];
    std::printf("%lld\n", result);
    return 0;
}
