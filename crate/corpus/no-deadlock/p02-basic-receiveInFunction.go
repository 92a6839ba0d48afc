// pattern: P2 basic-receiveInFunction
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

func receive(c chan int) {
	fmt.Println(<-c)
}

func main() {
	c := make(chan int)
	go sum([]int{1, 2, 3}, c)
	receive(c)
}
