// pattern: P1 basic
// expected: no-deadlock
package main

import "fmt"

func sum(s []int, c chan int) {
	total := 0
	for _, v := range s {
		total += v
	}
	c <- total
}

func main() {
	a := []int{1, 2, 3}
	b := []int{4, 5, 6}
	c1 := make(chan int)
	c2 := make(chan int)
	go sum(a, c1)
	go sum(b, c2)
	x, y := <-c1, <-c2
	fmt.Println(x + y)
}
