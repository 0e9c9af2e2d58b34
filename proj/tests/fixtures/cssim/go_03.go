package main

import (
	"bufio"
	"fmt"
	"os"
	"strings"
)

func main() {
	reader := bufio.NewReader(os.Stdin)
	line, _ := reader.ReadString('\n')
	words := strings.Fields(line)
	counts := make(map[string]int)
	for _, w := range words {
		counts[w]++
	}
	fmt.Println(len(counts))
}
