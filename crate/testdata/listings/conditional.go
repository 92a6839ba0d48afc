package main

import (
	"fmt"
	"math/rand"
)

func main() {
	ch := make(chan int)
	weekday := rand.Intn(7) + 1
	if 1 <= weekday && weekday <= 3 {
		go func() {
			ch <- 1
		}()
	}
	if 3 <= weekday && weekday <= 5 {
		go func() {
			fmt.Println(<-ch)
		}()
	}
}
