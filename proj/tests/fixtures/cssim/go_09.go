package main

import "fmt"

func main() {
	grid := [][]int{{1, 2, 3}, {4, 5, 6}}
	best := grid[0][0]
	for r := range grid {
		for c := range grid[r] {
			if grid[r][c] > best {
				best = grid[r][c]
			}
		}
	}
	double := func(x int) int { return x * 2 }
	fmt.Println(double(best))
}
