// pattern: P13 func
// expected: deadlock
package main

import "fmt"

func get(c chan int) int {
	return <-c
}

func main() {
	a := make(chan int)
	b := make(chan string)
	go func() {
		a <- 1
	}()
	fmt.Println(get(a))
	fmt.Println(<-b)
}
