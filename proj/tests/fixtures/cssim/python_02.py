# min
n = int(input())
values = list(map(int, input().split()))
result = values[0]
for i in range(1, n):
    if values[i] < result:
        result = values[i]
print(result)
