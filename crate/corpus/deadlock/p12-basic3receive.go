// pattern: P12 basic3receive
// expected: deadlock
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
	c := make(chan int)
	go sum([]int{1, 2}, c)
	go sum([]int{3, 4}, c)
	x, y, z := <-c, <-c, <-c
	fmt.Println(x, y, z)
}
