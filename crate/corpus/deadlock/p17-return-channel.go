// pattern: P17 return-channel
// expected: deadlock
package main

import "fmt"

func producer() chan int {
	ch := make(chan int)
	go func() {
		ch <- 1
	}()
	return ch
}

func main() {
	ch := producer()
	fmt.Println(<-ch)
	fmt.Println(<-ch)
}
