package main

import (
	"fmt"
	"strconv"
)

func main() {
	parts := []string{"12", "30", "x", "8"}
	sum := 0
	for _, p := range parts {
		n, err := strconv.Atoi(p)
		if err != nil {
			continue
		}
		sum += n
	}
	fmt.Println(sum)
}
