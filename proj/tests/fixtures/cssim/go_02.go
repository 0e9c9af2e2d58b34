package main

import "fmt"

type Point struct {
	X, Y int
}

func (p Point) Norm1() int {
	return abs(p.X) + abs(p.Y)
}

func abs(v int) int {
	if v < 0 {
		return -v
	}
	return v
}

func main() {
	p := Point{X: 3, Y: -4}
	fmt.Println(p.Norm1())
}
