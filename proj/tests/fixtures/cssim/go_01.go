package main

import (
	"fmt"
	"sort"
)

func main() {
	values := []int{5, 3, 9, 1}
	sort.Ints(values)
	for _, v := range values {
		fmt.Println(v)
	}
}
