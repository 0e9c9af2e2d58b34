package main

import "fmt"

func classify(v int) string {
	switch {
	case v < 0:
		return "negative"
	case v == 0:
		return "zero"
	default:
		return "positive"
	}
}

func main() {
	for _, v := range []int{-2, 0, 7} {
		fmt.Println(classify(v))
	}
}
