# sum_squares
n = int(input())
values = list(map(int, input().split()))
result = 0
for i in range(n):
    result += values[i] * values[i]
print(result)
